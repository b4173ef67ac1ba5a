#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <utility>
#include <vector>

#include "bell/classical.hpp"
#include "bell/scenario.hpp"

namespace bell::detail {

inline int worker_count() {
  if (const char* env = std::getenv("BELL_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Iterates deterministic vertices by index and scores them against
// per-setting-pattern row tables. Only patterns with positive setting weight
// participate; everything else contributes zero regardless of the table.
class VertexScan {
 public:
  VertexScan(const Scenario& s, const SettingDistribution& pi) : scenario_(s) {
    count_ = vertex_count(s);
    for (long long sp = 0; sp < s.setting_patterns(); ++sp) {
      if (pi.weights[sp] <= 0.0) continue;
      pattern_ids_.push_back(sp);
      auto settings = s.unpack_settings(sp);
      for (int party = 0; party < s.parties; ++party)
        slots_.push_back(party * s.settings + settings[party]);
    }
  }

  long long size() const { return count_; }
  const std::vector<long long>& pattern_ids() const { return pattern_ids_; }

  // Outcome-pattern index chosen by vertex `v` at the k-th active pattern.
  long long outcome_pattern(long long v, std::size_t k, int* assignment) const {
    decode(v, assignment);
    return outcome_pattern_from(assignment, k);
  }

  long long outcome_pattern_from(const int* assignment, std::size_t k) const {
    const int* slot = slots_.data() + k * scenario_.parties;
    long long o = 0;
    for (int party = 0; party < scenario_.parties; ++party)
      o = o * scenario_.outcomes + assignment[slot[party]];
    return o;
  }

  // rows[k] points at a table indexed by outcome pattern for pattern_ids()[k].
  double score(long long v, const std::vector<const double*>& rows) const {
    int assignment[caps::max_parties * caps::max_settings];
    decode(v, assignment);
    double total = 0.0;
    for (std::size_t k = 0; k < pattern_ids_.size(); ++k)
      total += rows[k][outcome_pattern_from(assignment, k)];
    return total;
  }

  // Deterministic threaded argmax: ties go to the smallest vertex index, no
  // matter how the range was chunked.
  std::pair<double, long long> max_scan(const std::vector<const double*>& rows) const {
    int threads = worker_count();
    if (count_ < 4096 || threads == 1) return max_range(rows, 0, count_);

    long long chunk = (count_ + threads - 1) / threads;
    std::vector<std::pair<double, long long>> best(threads, {0.0, -1});
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      long long lo = t * chunk;
      long long hi = std::min(count_, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([this, &rows, &best, t, lo, hi] { best[t] = max_range(rows, lo, hi); });
    }
    for (auto& th : pool) th.join();

    std::pair<double, long long> winner{0.0, -1};
    for (const auto& b : best) {
      if (b.second < 0) continue;
      if (winner.second < 0 || b.first > winner.first ||
          (b.first == winner.first && b.second < winner.second))
        winner = b;
    }
    return winner;
  }

  void decode(long long v, int* assignment) const {
    int pq = scenario_.parties * scenario_.settings;
    for (int i = pq - 1; i >= 0; --i) {
      assignment[i] = static_cast<int>(v % scenario_.outcomes);
      v /= scenario_.outcomes;
    }
  }

 private:
  std::pair<double, long long> max_range(const std::vector<const double*>& rows, long long lo,
                                          long long hi) const {
    int assignment[caps::max_parties * caps::max_settings];
    double best = 0.0;
    long long arg = -1;
    for (long long v = lo; v < hi; ++v) {
      decode(v, assignment);
      double total = 0.0;
      for (std::size_t k = 0; k < pattern_ids_.size(); ++k)
        total += rows[k][outcome_pattern_from(assignment, k)];
      if (arg < 0 || total > best) {
        best = total;
        arg = v;
      }
    }
    return {best, arg};
  }

  Scenario scenario_;
  long long count_ = 0;
  std::vector<long long> pattern_ids_;
  std::vector<int> slots_;  // pattern-major: [k * parties + party] -> assignment slot
};

}  // namespace bell::detail
