#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace viscotherm {

/// Malformed configuration or invalid user input (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iteration budget exhausted or no root in bracket.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Time integration failed (CLI exit code 3).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A constructed object failed its a-posteriori certification.
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// FNV-1a 64-bit hash, used for file checksums in run manifests.
std::uint64_t fnv1a64(std::span<const char> data);
std::uint64_t fnv1a64(const std::string& s);

/// Write-then-rename so readers never observe a partial file.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Round-trip decimal formatting (17 significant digits).
std::string format_double(double x);

std::string iso_timestamp_now();

/// Pairwise summation over a fixed index order; deterministic regardless of
/// how the values were produced.
double sum_pairwise(std::span<const double> xs);

/// Run fn(begin, end) over [0, n) split into contiguous blocks. Block
/// boundaries depend only on n and nthreads, never on scheduling, so any
/// value computed element-wise is bit-identical for every thread count.
void parallel_for_blocks(std::size_t n, int nthreads,
                         const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace viscotherm
