#ifndef RATCHET_FIELD_IO_HPP
#define RATCHET_FIELD_IO_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "ratchet/hilbert.hpp"
#include "ratchet/phase_space.hpp"
#include "ratchet/ulam.hpp"

namespace ratchet {

/// Persistence format: a raw little-endian payload file plus a JSON sidecar
/// "<payload>.json" declaring kind, dims, window, parameters, element type
/// and an FNV-1a 64 checksum of the payload bytes. Payloads round-trip
/// bit-exactly; complex values are interleaved (re, im) float64, row-major,
/// momentum index slowest.

using IoContext = std::map<std::string, std::string>;

std::uint64_t fnv1a64(const void* data, std::size_t size);

void write_field(const std::filesystem::path& payload_path, const PhaseField& field,
                 const IoContext& context = {});
PhaseField read_field(const std::filesystem::path& payload_path);

void write_density(const std::filesystem::path& payload_path, const DensityMatrix& rho,
                   const IoContext& context = {});
DensityMatrix read_density(const std::filesystem::path& payload_path);

void write_transfer(const std::filesystem::path& payload_path, const TransferMatrix& matrix,
                    const IoContext& context = {});
TransferMatrix read_transfer(const std::filesystem::path& payload_path);

/// Kind string from a sidecar, without loading the payload.
std::string peek_kind(const std::filesystem::path& payload_path);

}  // namespace ratchet

#endif
