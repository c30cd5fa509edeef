#pragma once

// Samplers for H^r(n, p) and the uniform H^r(s, m), component analysis, and
// a deterministic multi-threaded batch runner.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperconn/analytic.hpp"
#include "hyperconn/rng.hpp"

namespace hyperconn::simulation {

inline constexpr int kFormatVersion = 1;

/// p = d (r-1)! / n^{r-1}. The expected degree p binom(n-1, r-1) is d(1 + O(1/n)).
double p_from_d(int r, std::int64_t n, double d);

/// binom(n, r) as an unsigned 64-bit integer; throws DomainError on overflow.
std::uint64_t edge_universe(std::int64_t n, int r);

class Hypergraph {
 public:
  Hypergraph(std::int64_t n, int r);

  [[nodiscard]] std::int64_t n() const noexcept { return n_; }
  [[nodiscard]] int r() const noexcept { return r_; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return vertices_.size() / static_cast<std::size_t>(r_); }
  [[nodiscard]] std::span<const std::uint32_t> edge(std::size_t i) const noexcept {
    return {vertices_.data() + i * static_cast<std::size_t>(r_), static_cast<std::size_t>(r_)};
  }

  /// Appends an edge; vertices must be strictly increasing and < n. No
  /// duplicate check (samplers guarantee distinctness).
  void push_edge(std::span<const std::uint32_t> e);
  void clear() noexcept { vertices_.clear(); }
  void reserve(std::size_t edges) { vertices_.reserve(edges * static_cast<std::size_t>(r_)); }

 private:
  friend class Workspace;
  void append_unchecked(const std::uint32_t* e) { vertices_.insert(vertices_.end(), e, e + r_); }

  std::int64_t n_;
  int r_;
  std::vector<std::uint32_t> vertices_;
};

/// Rank of a strictly increasing r-set in colexicographic order.
std::uint64_t colex_rank(std::span<const std::uint32_t> e);
/// Inverse of colex_rank.
void colex_unrank(std::uint64_t rank, int r, std::span<std::uint32_t> out);

struct ComponentSummary {
  std::int64_t L1 = 0;
  std::int64_t M1 = 0;
  std::vector<std::int64_t> component_sizes;  // descending
  std::vector<std::int64_t> tree_counts;      // T_k for k = 0..k_cap
  std::int64_t non_tree_small_count = 0;      // non-tree components other than the largest
  std::int64_t isolated_count = 0;
  std::int64_t mid_size_count = 0;  // non-largest, size in (k_cap(r-1)+1, n/2]
  std::int64_t second_largest = 0;  // 0 when there is a single component
};

/// Reusable scratch space. One per thread; sampling and analysis through a
/// workspace allocate nothing in steady state.
class Workspace {
 public:
  Workspace();
  ~Workspace();
  Workspace(Workspace&&) noexcept;
  Workspace& operator=(Workspace&&) noexcept;

  void sample_gnp(int r, std::int64_t n, double p, rng::Engine& eng, Hypergraph& out);
  void sample_gsm(int r, std::int64_t s, std::int64_t m, rng::Engine& eng, Hypergraph& out);
  void components(const Hypergraph& h, int k_cap, ComponentSummary& out, bool keep_sizes = true);

 private:
  struct Impl;
  Impl* impl_;
};

Hypergraph sample_gnp(int r, std::int64_t n, double p, rng::Engine& eng);
Hypergraph sample_gsm(int r, std::int64_t s, std::int64_t m, rng::Engine& eng);
ComponentSummary components(const Hypergraph& h, int k_cap = 20);

// --- lattice-aligned bins ----------------------------------------------------

/// Intervals of width w centred at mu: bin i is [mu + (i - 1/2)w, mu + (i + 1/2)w).
/// On integers, bin i holds x with lower(i) <= x < lower(i + 1).
struct BinAxis {
  double mu = 0.0;
  double width = 1.0;
  [[nodiscard]] std::int64_t lower(std::int64_t i) const;
  [[nodiscard]] std::int64_t index(std::int64_t x) const;
};

// --- batches -------------------------------------------------------------------

enum class Model { Gnp, Gsm };

struct BatchParams {
  Model model = Model::Gnp;
  int r = 3;
  std::int64_t n = 0;  // vertex count (n for Gnp, s for Gsm)
  double d = 0.0;      // Gnp only
  std::int64_t m = 0;  // Gsm only
  std::int64_t trials = 1;
  std::uint64_t master_seed = 0;
  int k_cap = 20;
  int threads = 0;  // 0: HYPERCONN_THREADS, else hardware concurrency
};

struct TrialRecord {
  std::int64_t L1 = 0;
  std::int64_t M1 = 0;
  std::int64_t edges = 0;
  std::int64_t second_largest = 0;
  std::int64_t non_tree_small = 0;
  std::int64_t mid_size = 0;
};

struct Moments {
  double mean_L = 0.0, mean_M = 0.0;
  double var_L = 0.0, var_M = 0.0;  // unbiased
  double cov_LM = 0.0;
  double mean_edges = 0.0, var_edges = 0.0;
};

struct TrialBatch {
  BatchParams params;
  int threads_used = 1;
  std::vector<TrialRecord> trials;
  std::vector<std::int64_t> tree_counts;  // trials x (k_cap + 1), row-major
  Moments moments;
  std::vector<double> tree_mean;  // per k
  std::vector<double> tree_var;
  std::optional<analytic::LltParameters> llt;  // Gnp with supercritical d
  BinAxis axis_L, axis_M;
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> joint_bins;

  [[nodiscard]] std::int64_t tree_count(std::int64_t trial, int k) const {
    return tree_counts[static_cast<std::size_t>(trial) * (params.k_cap + 1) + k];
  }
};

/// Thread count from HYPERCONN_THREADS, else hardware concurrency (>= 1).
int default_threads();

TrialBatch run_batch(const BatchParams& params);

/// Deterministic JSON rendering (no timing or host data).
std::string to_json(const TrialBatch& batch, bool include_trials = false);

std::string_view to_string(Model model);

}  // namespace hyperconn::simulation
