#pragma once

// Seeded sampling helpers and deterministic work partitioning.
//
// Monte Carlo work is split into fixed-size blocks; block b always draws from
// a generator seeded by (seed, b). Results therefore do not depend on how many
// worker threads execute the blocks.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace auq {

using Rng = std::mt19937_64;

inline constexpr std::size_t kBlockSize = 1024;

/// Generator for one block of a seeded computation.
Rng block_rng(std::uint64_t seed, std::uint64_t block);

/// Worker count from AUQ_WORKERS, else hardware concurrency (at least 1).
std::size_t default_workers();

/// Runs fn(block) for block in [0, n_blocks) across `workers` threads.
/// fn must only write to block-owned state.
void parallel_blocks(std::size_t n_blocks, std::size_t workers, const std::function<void(std::size_t)>& fn);

/// Dirichlet draw via normalized Gamma variates. Entries can underflow to 0 for
/// very small concentrations.
std::vector<double> sample_dirichlet(std::span<const double> alpha, Rng& rng);
void sample_dirichlet(std::span<const double> alpha, Rng& rng, std::span<double> out);

}  // namespace auq
