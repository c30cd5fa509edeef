#pragma once

// Exact counts C_r(s, m) of connected m-edge r-uniform hypergraphs on s
// labelled vertices, by the vertex-1 deletion recurrence, plus an independent
// brute-force counter and a versioned text format for count tables.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hyperconn/bigcount.hpp"

namespace hyperconn::enumeration {

/// Largest s the recurrence will attempt, per r. Defaults sized for a
/// desktop; all are configuration.
struct Budget {
  int s_max_r2 = 40;
  int s_max_r3 = 20;
  int s_max_other = 14;
  /// Cap on the number of m-subsets brute_force_connected may visit.
  double brute_force_subsets = 1e8;

  [[nodiscard]] int s_max(int r) const noexcept { return r == 2 ? s_max_r2 : r == 3 ? s_max_r3 : s_max_other; }
};

/// binom(binom(s, r), m).
BigCount total_count(int r, std::int64_t s, std::int64_t m);

class CountTable {
 public:
  CountTable(int r, int s_max);

  [[nodiscard]] int r() const noexcept { return r_; }
  [[nodiscard]] int s_max() const noexcept { return s_max_; }
  /// binom(s, r) for s <= s_max.
  [[nodiscard]] std::int64_t edge_universe(int s) const;
  [[nodiscard]] bool contains(std::int64_t s, std::int64_t m) const noexcept;
  /// Throws DomainError when (s, m) is outside the table.
  [[nodiscard]] const BigCount& at(std::int64_t s, std::int64_t m) const;
  [[nodiscard]] const std::vector<BigCount>& row(int s) const;

  std::vector<BigCount>& mutable_row(int s);

 private:
  int r_;
  int s_max_;
  std::vector<std::vector<BigCount>> rows_;  // rows_[s][m]; rows_[0] unused
};

/// C_r(s, m) for 1 <= s <= s_max and 0 <= m <= binom(s, r).
/// Throws BudgetExceeded when s_max exceeds budget.s_max(r).
CountTable exact_connected_table(int r, int s_max, const Budget& budget = {});

/// Direct enumeration of all m-subsets of the edge universe.
BigCount brute_force_connected(int r, int s, std::int64_t m, const Budget& budget = {});

/// log(C_r(s, m) / binom(binom(s, r), m)); -infinity when C = 0.
double exact_log_P(const CountTable& table, std::int64_t s, std::int64_t m);

/// log(a / b) for positive a, b, to about 1e-16 relative.
double log_ratio(const BigCount& a, const BigCount& b);

void write_table(std::ostream& out, const CountTable& table);
/// Throws DomainError on a malformed or wrong-version file.
CountTable read_table(std::istream& in);

}  // namespace hyperconn::enumeration
