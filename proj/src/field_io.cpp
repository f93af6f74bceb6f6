#include "ratchet/field_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "the field file format assumes a little-endian host");

namespace ratchet {

using nlohmann::json;

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

namespace {

std::filesystem::path sidecar_path(const std::filesystem::path& payload) {
    std::filesystem::path p = payload;
    p += ".json";
    return p;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_payload(const std::filesystem::path& path, const void* data, std::size_t size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open payload for writing: " + path.string());
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw IoError("short write: " + path.string());
}

void write_sidecar(const std::filesystem::path& payload, json meta, const void* data,
                   std::size_t size) {
    meta["endianness"] = "little";
    meta["checksum_fnv1a64"] = hex64(fnv1a64(data, size));
    meta["payload_bytes"] = size;
    std::ofstream out(sidecar_path(payload), std::ios::trunc);
    if (!out) throw IoError("cannot open sidecar for writing: " + sidecar_path(payload).string());
    out << meta.dump(2) << '\n';
}

json read_sidecar(const std::filesystem::path& payload) {
    std::ifstream in(sidecar_path(payload));
    if (!in) throw IoError("missing sidecar: " + sidecar_path(payload).string());
    json meta;
    try {
        in >> meta;
    } catch (const json::exception& e) {
        throw IoError("malformed sidecar " + sidecar_path(payload).string() + ": " + e.what());
    }
    return meta;
}

std::vector<char> read_payload_checked(const std::filesystem::path& path, const json& meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("missing payload: " + path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    const auto expected = meta.at("payload_bytes").get<std::uint64_t>();
    if (bytes.size() < expected) throw IoError("truncated payload: " + path.string());
    if (bytes.size() > expected) throw IoError("payload larger than declared: " + path.string());
    const std::string checksum = hex64(fnv1a64(bytes.data(), bytes.size()));
    if (checksum != meta.at("checksum_fnv1a64").get<std::string>())
        throw IoError("checksum mismatch: " + path.string());
    return bytes;
}

void require_kind(const json& meta, const std::string& kind, const std::filesystem::path& path) {
    const std::string found = meta.value("kind", "<absent>");
    if (found != kind)
        throw IoError("unknown kind '" + found + "' (expected '" + kind + "') in " +
                      sidecar_path(path).string());
}

json window_json(const Window& w) {
    return json{{"x_min", w.x_min}, {"x_max", w.x_max}, {"p_min", w.p_min}, {"p_max", w.p_max}};
}

Window window_from_json(const json& j) {
    return Window{j.at("x_min").get<double>(), j.at("x_max").get<double>(),
                  j.at("p_min").get<double>(), j.at("p_max").get<double>()};
}

json params_json(const MapParams& p) {
    return json{{"k", p.k}, {"gamma", p.gamma}, {"a", p.a}, {"phi", p.phi},
                {"hbar_eff", p.hbar_eff}};
}

MapParams params_from_json(const json& j) {
    MapParams p;
    p.k = j.at("k").get<double>();
    p.gamma = j.at("gamma").get<double>();
    p.a = j.at("a").get<double>();
    p.phi = j.at("phi").get<double>();
    p.hbar_eff = j.at("hbar_eff").get<double>();
    return p;
}

}  // namespace

void write_field(const std::filesystem::path& payload_path, const PhaseField& field,
                 const IoContext& context) {
    const std::size_t bytes = field.values.size() * sizeof(Complex);
    write_payload(payload_path, field.values.data(), bytes);

    json meta{{"kind", "phase_field"},
              {"element_type", "complex128"},
              {"rows", field.rows},
              {"cols", field.cols},
              {"window", window_json(field.window)},
              {"provenance", provenance_name(field.provenance)},
              {"expect_real", field.expect_real}};
    if (!context.empty()) meta["context"] = context;
    write_sidecar(payload_path, std::move(meta), field.values.data(), bytes);
}

PhaseField read_field(const std::filesystem::path& payload_path) {
    const json meta = read_sidecar(payload_path);
    require_kind(meta, "phase_field", payload_path);
    const auto bytes = read_payload_checked(payload_path, meta);

    PhaseField field(meta.at("rows").get<int>(), meta.at("cols").get<int>(),
                     window_from_json(meta.at("window")), PhaseField::Provenance::Histogram);
    const std::string prov = meta.at("provenance").get<std::string>();
    if (prov == "classical_eigenvector")
        field.provenance = PhaseField::Provenance::ClassicalEigenvector;
    else if (prov == "wigner_symbol")
        field.provenance = PhaseField::Provenance::WignerSymbol;
    else if (prov == "histogram")
        field.provenance = PhaseField::Provenance::Histogram;
    else
        throw IoError("unknown provenance '" + prov + "' in " + payload_path.string());
    field.expect_real = meta.value("expect_real", false);

    if (bytes.size() != field.values.size() * sizeof(Complex))
        throw IoError("truncated payload: " + payload_path.string());
    std::memcpy(field.values.data(), bytes.data(), bytes.size());
    return field;
}

void write_density(const std::filesystem::path& payload_path, const DensityMatrix& rho,
                   const IoContext& context) {
    const int n = rho.N();
    std::vector<Complex> row_major(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) row_major[static_cast<std::size_t>(r) * n + c] = rho.m(r, c);
    const std::size_t bytes = row_major.size() * sizeof(Complex);
    write_payload(payload_path, row_major.data(), bytes);

    json meta{{"kind", "density_matrix"},
              {"element_type", "complex128"},
              {"n", n},
              {"basis", rho.basis == Basis::Momentum ? "momentum" : "position"}};
    if (rho.eigenvalue) {
        meta["eigenvalue_re"] = rho.eigenvalue->real();
        meta["eigenvalue_im"] = rho.eigenvalue->imag();
    }
    if (!context.empty()) meta["context"] = context;
    write_sidecar(payload_path, std::move(meta), row_major.data(), bytes);
}

DensityMatrix read_density(const std::filesystem::path& payload_path) {
    const json meta = read_sidecar(payload_path);
    require_kind(meta, "density_matrix", payload_path);
    const auto bytes = read_payload_checked(payload_path, meta);

    const int n = meta.at("n").get<int>();
    if (bytes.size() != static_cast<std::size_t>(n) * n * sizeof(Complex))
        throw IoError("truncated payload: " + payload_path.string());

    DensityMatrix rho;
    rho.m.resize(n, n);
    const auto* values = reinterpret_cast<const Complex*>(bytes.data());
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) rho.m(r, c) = values[static_cast<std::size_t>(r) * n + c];
    rho.basis = meta.at("basis").get<std::string>() == "position" ? Basis::Position
                                                                  : Basis::Momentum;
    if (meta.contains("eigenvalue_re"))
        rho.eigenvalue = Complex(meta.at("eigenvalue_re").get<double>(),
                                 meta.at("eigenvalue_im").get<double>());
    return rho;
}

void write_transfer(const std::filesystem::path& payload_path, const TransferMatrix& matrix,
                    const IoContext& context) {
    // payload layout: col_ptr (M^2+1 int64) | row_idx (nnz int64) | values (nnz float64)
    const std::int64_t dim = matrix.dimension();
    const std::int64_t nnz = matrix.nnz();
    std::vector<char> payload;
    payload.reserve(sizeof(std::int64_t) * (dim + 1 + nnz) + sizeof(double) * nnz);

    auto append = [&payload](const void* data, std::size_t size) {
        const auto* p = static_cast<const char*>(data);
        payload.insert(payload.end(), p, p + size);
    };
    append(matrix.col_ptr.data(), matrix.col_ptr.size() * sizeof(std::int64_t));
    std::vector<std::int64_t> rows64(matrix.row_idx.begin(), matrix.row_idx.end());
    append(rows64.data(), rows64.size() * sizeof(std::int64_t));
    append(matrix.values.data(), matrix.values.size() * sizeof(double));

    write_payload(payload_path, payload.data(), payload.size());

    json meta{{"kind", "transfer_matrix"},
              {"element_type", "int64+float64"},
              {"M", matrix.grid.M()},
              {"p_max", matrix.grid.p_max()},
              {"nnz", nnz},
              {"n_tr", matrix.n_tr},
              {"seed", matrix.seed},
              {"params", params_json(matrix.params)},
              {"noise", json{{"variance", matrix.noise.variance},
                             {"truncation", matrix.noise.truncation}}}};
    if (!context.empty()) meta["context"] = context;
    write_sidecar(payload_path, std::move(meta), payload.data(), payload.size());
}

TransferMatrix read_transfer(const std::filesystem::path& payload_path) {
    const json meta = read_sidecar(payload_path);
    require_kind(meta, "transfer_matrix", payload_path);
    const auto bytes = read_payload_checked(payload_path, meta);

    TransferMatrix matrix;
    matrix.grid = UlamGrid(meta.at("M").get<int>(), meta.at("p_max").get<double>());
    matrix.params = params_from_json(meta.at("params"));
    matrix.noise.variance = meta.at("noise").at("variance").get<double>();
    matrix.noise.truncation = meta.at("noise").at("truncation").get<double>();
    matrix.n_tr = meta.at("n_tr").get<std::int64_t>();
    matrix.seed = meta.at("seed").get<std::uint64_t>();

    const std::int64_t dim = matrix.dimension();
    const std::int64_t nnz = meta.at("nnz").get<std::int64_t>();
    const std::size_t expected = sizeof(std::int64_t) * static_cast<std::size_t>(dim + 1 + nnz) +
                                 sizeof(double) * static_cast<std::size_t>(nnz);
    if (bytes.size() != expected) throw IoError("truncated payload: " + payload_path.string());

    const char* cursor = bytes.data();
    matrix.col_ptr.resize(static_cast<std::size_t>(dim) + 1);
    std::memcpy(matrix.col_ptr.data(), cursor, matrix.col_ptr.size() * sizeof(std::int64_t));
    cursor += matrix.col_ptr.size() * sizeof(std::int64_t);

    std::vector<std::int64_t> rows64(static_cast<std::size_t>(nnz));
    std::memcpy(rows64.data(), cursor, rows64.size() * sizeof(std::int64_t));
    cursor += rows64.size() * sizeof(std::int64_t);
    matrix.row_idx.assign(rows64.begin(), rows64.end());

    matrix.values.resize(static_cast<std::size_t>(nnz));
    std::memcpy(matrix.values.data(), cursor, matrix.values.size() * sizeof(double));

    matrix.build_row_mirror();
    return matrix;
}

std::string peek_kind(const std::filesystem::path& payload_path) {
    return read_sidecar(payload_path).value("kind", "<absent>");
}

}  // namespace ratchet
