#include "ratchet/wigner.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace ratchet {

namespace {

/// RAII 1D/2D FFTW plan executed on caller-provided buffers.
class FftPlan {
  public:
    FftPlan(int rows, int cols, int sign) {
        std::vector<Complex> scratch(static_cast<std::size_t>(rows) * std::max(cols, 1));
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan_ = cols > 0 ? fftw_plan_dft_2d(rows, cols, buf, buf, sign,
                                            FFTW_ESTIMATE | FFTW_UNALIGNED)
                         : fftw_plan_dft_1d(rows, buf, buf, sign,
                                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    ~FftPlan() {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan_);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    void run(Complex* data) const {
        auto* buf = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(plan_, buf, buf);
    }

  private:
    fftw_plan plan_;
};

void require_nonzero(double norm, const char* who) {
    if (norm == 0.0) throw std::invalid_argument(std::string(who) + ": zero payload");
}

}  // namespace

PhaseField weyl_symbol(const DensityMatrix& rho_position, double hbar_eff) {
    if (rho_position.basis != Basis::Position)
        throw std::invalid_argument("weyl_symbol: operator must be in the position basis");
    const int N = rho_position.N();
    const MatrixXc& rho = rho_position.m;

    Window window{0.0, kTwoPi, -0.5 * N * hbar_eff, 0.5 * N * hbar_eff};
    PhaseField symbol(2 * N, 2 * N, window, PhaseField::Provenance::WignerSymbol);
    symbol.expect_real = rho_position.hermiticity_defect() <= 1e-12 * std::max(1.0, rho.norm());

    // R(s,t) = exp(i pi s t / N) * C_t(s mod N) with
    // C_t = DFT_n of c_t(n) = rho((t - n) mod N, n); c_{t+N} = c_t.
    FftPlan fft(N, 0, FFTW_FORWARD);
    std::vector<Complex> c(static_cast<std::size_t>(N));
    std::vector<Complex> half_phase(static_cast<std::size_t>(2 * N));
    for (int s = 0; s < 2 * N; ++s)
        half_phase[s] = std::polar(1.0, M_PI * static_cast<double>(s) / N);

    for (int t = 0; t < N; ++t) {
        for (int n = 0; n < N; ++n) {
            int q = (t - n) % N;
            if (q < 0) q += N;
            c[static_cast<std::size_t>(n)] = rho(q, n);
        }
        fft.run(c.data());
        for (int s = 0; s < 2 * N; ++s) {
            // phase = exp(i pi s t / N); the t+N column flips sign at odd s
            Complex phase = 1.0;
            const long long st = static_cast<long long>(s) * t % (2 * N);
            phase = half_phase[static_cast<std::size_t>(st)];
            const Complex value = phase * c[static_cast<std::size_t>(s % N)];
            symbol.at(s, t) = value;
            symbol.at(s, t + N) = (s % 2 == 0) ? value : -value;
        }
    }
    return symbol;
}

PhaseField chord_filter(const PhaseField& symbol, const ChordCutoff& cutoff) {
    if (symbol.rows != symbol.cols || symbol.rows % 2 != 0)
        throw std::invalid_argument("chord_filter: input must be a 2N x 2N Weyl symbol");
    const int N = symbol.rows / 2;
    cutoff.validate(N);
    const int two_n = 2 * N;

    std::vector<Complex> chords(symbol.values);
    FftPlan fwd(two_n, two_n, FFTW_FORWARD);
    FftPlan bwd(two_n, two_n, FFTW_BACKWARD);
    fwd.run(chords.data());

    // chord (u, v) translates by half a cell per index unit; remove lengths
    // >= radius (open disk keeps the filter window centro-symmetric)
    const double keep_sq = 4.0 * cutoff.radius * cutoff.radius;
    for (int u = 0; u < two_n; ++u) {
        const int uc = (u + N) % two_n - N;
        for (int v = 0; v < two_n; ++v) {
            const int vc = (v + N) % two_n - N;
            if (static_cast<double>(uc) * uc + static_cast<double>(vc) * vc >= keep_sq)
                chords[static_cast<std::size_t>(u) * two_n + v] = 0.0;
        }
    }
    bwd.run(chords.data());

    PhaseField out(N, N, symbol.window, PhaseField::Provenance::WignerSymbol);
    out.expect_real = symbol.expect_real;
    const int L = (N - 1) / 2;
    const double norm = 1.0 / (static_cast<double>(two_n) * two_n);
    for (int r = 0; r < N; ++r) {
        // row r holds physical momentum n = r - L; with the symbol kernel
        // exp(+i 2pi 2a(b-n)/N) and <x|n> = exp(+i n x) the momentum-n state
        // localizes at a = -n mod N
        const int a = ((L - r) % N + N) % N;
        for (int j = 0; j < N; ++j)
            out.at(r, j) = norm * chords[static_cast<std::size_t>(2 * a) * two_n + 2 * j];
    }
    return out;
}

Complex hermitizing_phase(const MatrixXc& v) {
    const double norm = v.norm();
    require_nonzero(norm, "hermitizing_phase");
    const Complex s = (v.array() * v.transpose().array()).sum();  // tr(V^2)
    Complex phase = 1.0;
    if (std::abs(s) > 1e-14 * norm * norm) phase = std::polar(1.0, -0.5 * std::arg(s));

    const Complex tr = phase * v.trace();
    if (tr.real() < -1e-12 * norm) return -phase;
    if (std::abs(tr) <= 1e-12 * norm) {
        // traceless payload: pin the sign with the largest entry
        Eigen::Index i = 0, j = 0;
        v.cwiseAbs().maxCoeff(&i, &j);
        if ((phase * v(i, j)).real() < 0.0) return -phase;
    }
    return phase;
}

Complex realizing_phase(const PhaseField& field) {
    double norm_sq = 0.0;
    Complex s = 0.0;
    for (const auto& z : field.values) {
        norm_sq += std::norm(z);
        s += z * z;
    }
    require_nonzero(norm_sq, "realizing_phase");
    Complex phase = 1.0;
    if (std::abs(s) > 1e-14 * norm_sq) phase = std::polar(1.0, -0.5 * std::arg(s));

    const auto it = std::max_element(field.values.begin(), field.values.end(),
                                     [](const Complex& a, const Complex& b) {
                                         return std::norm(a) < std::norm(b);
                                     });
    if ((phase * *it).real() < 0.0) return -phase;
    return phase;
}

Complex positivizing_phase(const PhaseField& field) {
    const auto it = std::max_element(field.values.begin(), field.values.end(),
                                     [](const Complex& a, const Complex& b) {
                                         return std::norm(a) < std::norm(b);
                                     });
    require_nonzero(std::abs(*it), "positivizing_phase");
    return std::polar(1.0, -std::arg(*it));
}

namespace {
bool is_real_eigenvalue(Complex lambda) {
    return std::abs(lambda.imag()) <= 1e-8 * std::max(1.0, std::abs(lambda));
}
}  // namespace

void fix_phase(MatrixXc& v, Complex lambda) {
    require_nonzero(v.norm(), "fix_phase");
    if (is_real_eigenvalue(lambda)) {
        v *= hermitizing_phase(v);
        return;
    }
    // complex eigenvalue: make the maximal-modulus symbol entry real positive
    FourierTransformer dft(static_cast<int>(v.rows()));
    DensityMatrix pos;
    pos.m = dft.to_position(v);
    pos.basis = Basis::Position;
    const PhaseField symbol = weyl_symbol(pos, 1.0);
    v *= positivizing_phase(symbol);
}

void fix_phase(PhaseField& field, Complex lambda) {
    const Complex phase =
        is_real_eigenvalue(lambda) ? realizing_phase(field) : positivizing_phase(field);
    for (auto& z : field.values) z *= phase;
    if (is_real_eigenvalue(lambda)) field.expect_real = true;
}

void fix_phase_pair(PhaseField& plus, PhaseField& minus) {
    if (!plus.same_grid(minus)) throw std::invalid_argument("fix_phase_pair: grid mismatch");
    Complex ip = 0.0;
    for (std::size_t idx = 0; idx < plus.values.size(); ++idx)
        ip += plus.values[idx] * minus.values[idx];
    require_nonzero(std::abs(ip), "fix_phase_pair");
    const Complex phase = std::conj(ip) / std::abs(ip);
    for (auto& z : minus.values) z *= phase;
}

void fix_phase_run(std::vector<PhaseField>& fields, const std::vector<Complex>& lambdas) {
    if (fields.size() > lambdas.size())
        throw std::invalid_argument("fix_phase_run: missing eigenvalues");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const Complex lam = lambdas[i];
        if (std::abs(lam.imag()) <= 1e-8 * std::max(1.0, std::abs(lam))) {
            fix_phase(fields[i], lam);
            continue;
        }
        const double ptol = 1e-6 * std::max(1.0, std::abs(lam));
        if (lam.imag() > 0.0) {
            fix_phase(fields[i], lam);
            if (i + 1 < fields.size() && std::abs(lambdas[i + 1] - std::conj(lam)) <= ptol)
                fix_phase_pair(fields[i], fields[i + 1]);
        } else if (i == 0 || std::abs(lambdas[i - 1] - std::conj(lam)) > ptol) {
            // unpaired -Im eigenvalue: fix on its own
            fix_phase(fields[i], lam);
        }
    }
}

Complex overlap(const PhaseField& r1, const PhaseField& r2) {
    if (!r1.same_grid(r2))
        throw std::invalid_argument("overlap: grids or windows differ (resampling refused)");
    Complex num = 0.0;
    double n1 = 0.0, n2 = 0.0;
    for (std::size_t idx = 0; idx < r1.values.size(); ++idx) {
        num += r1.values[idx] * std::conj(r2.values[idx]);
        n1 += std::norm(r1.values[idx]);
        n2 += std::norm(r2.values[idx]);
    }
    if (n1 == 0.0 || n2 == 0.0) throw std::invalid_argument("overlap: zero-norm field");
    return num / std::sqrt(n1 * n2);
}

}  // namespace ratchet
