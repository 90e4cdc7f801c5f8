#pragma once

#include <cstddef>

namespace dzo {

/// Selects between the OpenMP kernels and their serial reference versions.
/// Both produce the same values; the serial path exists for testing and for
/// callers that are already running inside a parallel region.
enum class Exec { Serial, Parallel };

/// Threads used by OpenMP kernels (omp_get_max_threads, or 1 without OpenMP).
int max_threads() noexcept;

/// Threads allowed for seed sweeps: min(max_threads(), $DZO_THREADS) when the
/// variable is set to a positive integer.
int sweep_threads() noexcept;

/// Monte-Carlo reductions are split into this many fixed blocks so that the
/// parallel sum is independent of the thread count.
inline constexpr std::size_t kReductionBlocks = 256;

}  // namespace dzo
