#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wicmax {

/// Dense node index in [0, node_count).
using NodeId = std::uint32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Output of every seed selector.
struct SeedResult {
  std::vector<NodeId> seeds;
  /// Selector-internal score of each pick (estimated sigma, node value, rank score).
  std::vector<double> step_scores;
  /// Cumulative wall time in ms at the moment each seed was fixed, including
  /// any pre-treatment. Prefix k of an incremental run costs step_ms[k-1].
  std::vector<double> step_ms;

  double total_ms() const { return step_ms.empty() ? 0.0 : step_ms.back(); }
};

/// Caps the worker pool used by the OpenMP loops. 0 leaves the runtime default.
inline void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace wicmax
