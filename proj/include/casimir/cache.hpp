// cache.hpp — model fingerprints and on-disk eigendecomposition cache

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "casimir/spectrum.hpp"

namespace casimir {

// FNV-1a over a canonical serialization (hexfloat parameters, so any bit
// change in a double changes the fingerprint).
std::uint64_t fingerprint_model(const HamiltonianModel& model, const std::vector<int>& truncations);

std::string cache_file_path(const std::string& cache_dir, std::uint64_t fingerprint);

// Binary round trip is bit-identical (raw little-endian doubles plus an
// FNV checksum of the payload).
void cache_eig(const std::string& cache_dir, std::uint64_t fingerprint,
               const EigenDecomposition& eig);

// nullopt on miss; corrupt or mismatched files also come back as nullopt
// (the caller recomputes, optionally warning).
std::optional<EigenDecomposition> load_eig(const std::string& cache_dir,
                                           std::uint64_t fingerprint);

} // namespace casimir
