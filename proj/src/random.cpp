#include "auq/random.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "auq/error.hpp"

namespace auq {

Rng block_rng(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return Rng(seq);
}

std::size_t default_workers() {
  if (const char* env = std::getenv("AUQ_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw ValidationError(std::string("AUQ_WORKERS must be a positive integer (got '") + env + "')");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_blocks(std::size_t n_blocks, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n_blocks, 1));
  if (workers == 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t b = next++; b < n_blocks; b = next++) {
        try {
          fn(b);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n_blocks;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void sample_dirichlet(std::span<const double> alpha, Rng& rng, std::span<double> out) {
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    std::gamma_distribution<double> g(alpha[i], 1.0);
    out[i] = g(rng);
    total += out[i];
  }
  if (total <= 0.0) {
    // Every coordinate underflowed; only possible for tiny concentrations.
    std::uniform_int_distribution<std::size_t> pick(0, alpha.size() - 1);
    std::fill(out.begin(), out.end(), 0.0);
    out[pick(rng)] = 1.0;
    return;
  }
  for (double& v : out) v /= total;
}

std::vector<double> sample_dirichlet(std::span<const double> alpha, Rng& rng) {
  std::vector<double> out(alpha.size());
  sample_dirichlet(alpha, rng, out);
  return out;
}

}  // namespace auq
