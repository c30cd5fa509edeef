#pragma once

// The Galton-Watson process B_{r,d}: each individual has Po(d) groups of r-1
// children. Point probabilities of the total edge count, the decay bound, the
// negative moment, the Selivanov tree count and a trajectory simulator.

#include <cstdint>
#include <optional>
#include <vector>

#include "hyperconn/bigcount.hpp"
#include "hyperconn/rng.hpp"

namespace hyperconn::branching {

struct OffspringLaw {
  int r = 3;
  double d = 1.0;
  OffspringLaw(int r, double d);
  [[nodiscard]] bool supercritical() const noexcept { return (r - 1) * d > 1.0; }
};

/// log pi_k = (k-1) log s + k log d - log k! - d s, with s = 1 + (r-1)k.
double log_pi_k(int r, double d, std::int64_t k);
double pi_k(int r, double d, std::int64_t k);

/// Smallest d beyond which e r d e^{-(r-1)d/2} <= 1 holds for all larger d.
double decay_threshold(int r);

/// sum_{k >= k_from} e^{-d(s+1)/2}; an upper bound on sum_{k >= k_from} pi_k.
/// Throws NotApplicable when d < decay_threshold(r).
double pi_tail_bound(int r, double d, std::int64_t k_from);

struct PointMassTable {
  int r = 3;
  double d = 0.0;
  std::int64_t k_max = 0;
  std::vector<double> logpi;  // k = 0..k_max
  std::optional<double> tail_bound;
};

PointMassTable point_masses(int r, double d, std::int64_t k_max);

struct ExtinctionCheck {
  double sum_pi = 0.0;
  double xi = 1.0;
  std::optional<double> tail_bound;  // bound on sum_{k > k_max} pi_k when applicable
};

ExtinctionCheck extinction_check(int r, double d, std::int64_t k_max);

/// E[1/|B_{r,d}|] = 1 - (r-1)d/r for subcritical d.
double negative_moment(int r, double d);
/// sum_{k <= k_max} pi_k / s, the truncated series behind negative_moment.
double negative_moment_series(int r, double d, std::int64_t k_max);

/// n_k = s^{k-1} (s-1)! / (k! (r-1)!^k): labelled r-trees with k edges.
BigCount tree_count(int r, std::int64_t k);

struct BpOutcome {
  bool censored = false;
  std::int64_t edges = 0;  // meaningful only when !censored
};

/// Explores the tree one individual at a time, giving each Po(d) groups of
/// r-1 children; stops when nobody is left to explore or the edge count
/// exceeds edge_cap.
BpOutcome simulate_bp(int r, double d, rng::Engine& eng, std::int64_t edge_cap = 1'000'000);

}  // namespace hyperconn::branching
