#include "hyperconn/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "hyperconn/errors.hpp"

namespace hyperconn::enumeration {

namespace {

constexpr const char* kHeader = "hyperconn-counts v1";

std::int64_t small_choose(std::int64_t n, int k) {
  if (k < 0 || n < k) return 0;
  std::int64_t out = 1;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

std::vector<BigCount> binomial_row(std::int64_t n) {
  std::vector<BigCount> row(static_cast<std::size_t>(n) + 1);
  row[0] = 1;
  for (std::int64_t k = 1; k <= n; ++k) {
    row[k] = row[k - 1] * static_cast<unsigned long>(n - k + 1);
    mpz_divexact_ui(row[k].get_mpz_t(), row[k].get_mpz_t(), static_cast<unsigned long>(k));
  }
  return row;
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

BigCount total_count(int r, std::int64_t s, std::int64_t m) {
  if (r < 2 || s < 0) throw DomainError("need r >= 2 and s >= 0");
  const std::int64_t N = small_choose(s, r);
  if (m < 0 || m > N) throw DomainError("m must lie in [0, binom(s, r)]");
  return big_choose(static_cast<unsigned long>(N), static_cast<unsigned long>(m));
}

CountTable::CountTable(int r, int s_max) : r_(r), s_max_(s_max) {
  if (r < 2) throw DomainError("uniformity r must be >= 2");
  if (s_max < 1) throw DomainError("s_max must be >= 1");
  rows_.resize(static_cast<std::size_t>(s_max) + 1);
  for (int s = 1; s <= s_max; ++s) rows_[s].assign(static_cast<std::size_t>(small_choose(s, r)) + 1, BigCount(0));
}

std::int64_t CountTable::edge_universe(int s) const {
  if (s < 1 || s > s_max_) throw DomainError("s outside table");
  return static_cast<std::int64_t>(rows_[s].size()) - 1;
}

bool CountTable::contains(std::int64_t s, std::int64_t m) const noexcept {
  return s >= 1 && s <= s_max_ && m >= 0 && m < static_cast<std::int64_t>(rows_[s].size());
}

const BigCount& CountTable::at(std::int64_t s, std::int64_t m) const {
  if (!contains(s, m))
    throw DomainError("no table entry for (s=" + std::to_string(s) + ", m=" + std::to_string(m) + ")");
  return rows_[s][m];
}

const std::vector<BigCount>& CountTable::row(int s) const {
  if (s < 1 || s > s_max_) throw DomainError("s outside table");
  return rows_[s];
}

std::vector<BigCount>& CountTable::mutable_row(int s) {
  if (s < 1 || s > s_max_) throw DomainError("s outside table");
  return rows_[s];
}

CountTable exact_connected_table(int r, int s_max, const Budget& budget) {
  if (r < 2) throw DomainError("uniformity r must be >= 2");
  if (s_max > budget.s_max(r))
    throw BudgetExceeded("s_max=" + std::to_string(s_max) + " exceeds the r=" + std::to_string(r) +
                         " budget of " + std::to_string(budget.s_max(r)));
  CountTable table(r, s_max);

  std::vector<std::vector<BigCount>> universe_rows(static_cast<std::size_t>(s_max) + 1);
  for (int t = 0; t <= s_max; ++t) universe_rows[t] = binomial_row(small_choose(t, r));

  BigCount term;
  for (int s = 1; s <= s_max; ++s) {
    auto& out = table.mutable_row(s);
    const auto& all = universe_rows[s];
    std::copy(all.begin(), all.end(), out.begin());
    // Subtract hypergraphs whose component containing vertex 1 has j < s vertices.
    for (int j = 1; j < s; ++j) {
      const BigCount ways = big_choose(static_cast<unsigned long>(s - 1), static_cast<unsigned long>(j - 1));
      const auto& inner = table.row(j);
      const auto& rest = universe_rows[s - j];
      for (std::size_t i = 0; i < inner.size(); ++i) {
        if (sgn(inner[i]) == 0) continue;
        term = inner[i] * ways;
        for (std::size_t k = 0; k < rest.size(); ++k) mpz_submul(out[i + k].get_mpz_t(), term.get_mpz_t(), rest[k].get_mpz_t());
      }
    }
  }
  return table;
}

BigCount brute_force_connected(int r, int s, std::int64_t m, const Budget& budget) {
  if (r < 2 || s < 1) throw DomainError("need r >= 2 and s >= 1");
  const std::int64_t N = small_choose(s, r);
  if (m < 0 || m > N) throw DomainError("m must lie in [0, binom(s, r)]");
  if (std::exp(std::lgamma(N + 1.0) - std::lgamma(m + 1.0) - std::lgamma(N - m + 1.0)) > budget.brute_force_subsets)
    throw BudgetExceeded("brute force over binom(" + std::to_string(N) + ", " + std::to_string(m) + ") subsets");

  // Edge universe in colex order.
  std::vector<std::vector<int>> universe;
  std::vector<int> edge(r);
  std::iota(edge.begin(), edge.end(), 0);
  while (true) {
    if (edge[r - 1] >= s) break;
    universe.push_back(edge);
    int i = 0;
    while (i + 1 < r && edge[i] + 1 == edge[i + 1]) ++i;
    ++edge[i];
    for (int k = 0; k < i; ++k) edge[k] = k;
  }

  if (s == 1) return m == 0 ? 1 : 0;
  std::uint64_t count = 0;
  std::vector<std::int64_t> pick(static_cast<std::size_t>(m));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    DisjointSets ds(s);
    int merges = 0;
    for (auto e : pick)
      for (int k = 1; k < r; ++k) merges += ds.unite(universe[e][0], universe[e][k]);
    if (merges == s - 1) ++count;
    std::int64_t i = m - 1;
    while (i >= 0 && pick[i] == N - m + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (std::int64_t k = i + 1; k < m; ++k) pick[k] = pick[k - 1] + 1;
  }
  return BigCount(static_cast<unsigned long>(count));
}

double log_ratio(const BigCount& a, const BigCount& b) {
  if (sgn(a) <= 0 || sgn(b) <= 0) throw DomainError("log_ratio needs positive arguments");
  // mantissas in [0.5, 1) with binary exponents; each is correctly truncated to 53 bits
  auto split = [](const BigCount& x, long& e) { return mpz_get_d_2exp(&e, x.get_mpz_t()); };
  const BigCount diff = a - b;
  if (sgn(diff) == 0) return 0.0;
  if (2 * abs(diff) < b) {
    long ed = 0, eb = 0;
    const double md = split(abs(diff), ed), mb = split(b, eb);
    const double x = std::ldexp(md / mb, static_cast<int>(ed - eb));
    return std::log1p(sgn(diff) > 0 ? x : -x);
  }
  long ea = 0, eb = 0;
  const double ma = split(a, ea), mb = split(b, eb);
  return std::log(ma / mb) + double(ea - eb) * std::numbers::ln2;
}

double exact_log_P(const CountTable& table, std::int64_t s, std::int64_t m) {
  const BigCount& c = table.at(s, m);
  if (sgn(c) == 0) return -INFINITY;
  const BigCount total = total_count(table.r(), s, m);
  const BigCount missing = total - c;
  if (sgn(missing) == 0) return 0.0;
  // log1p keeps full relative accuracy when P is close to 1.
  if (2 * missing < total) return std::log1p(-std::exp(log_ratio(missing, total)));
  return log_ratio(c, total);
}

void write_table(std::ostream& out, const CountTable& table) {
  out << kHeader << " r=" << table.r() << " s_max=" << table.s_max() << '\n';
  for (int s = 1; s <= table.s_max(); ++s) {
    const auto& row = table.row(s);
    for (std::size_t m = 0; m < row.size(); ++m) out << s << ' ' << m << ' ' << row[m].get_str(10) << '\n';
  }
}

CountTable read_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("empty count table");
  int r = 0, s_max = 0;
  {
    const std::string prefix = std::string(kHeader) + " r=";
    if (line.rfind(prefix, 0) != 0) throw DomainError("not a hyperconn-counts v1 file: " + line);
    if (std::sscanf(line.c_str() + prefix.size(), "%d s_max=%d", &r, &s_max) != 2)
      throw DomainError("malformed count table header: " + line);
  }
  CountTable table(r, s_max);
  std::int64_t seen = 0, expected = 0;
  for (int s = 1; s <= s_max; ++s) expected += table.edge_universe(s) + 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::int64_t s = 0, m = 0;
    std::string value;
    if (!(fields >> s >> m >> value) || !table.contains(s, m))
      throw DomainError("bad count table line: " + line);
    BigCount c;
    if (c.set_str(value, 10) != 0 || sgn(c) < 0) throw DomainError("bad count: " + value);
    table.mutable_row(static_cast<int>(s))[m] = c;
    ++seen;
  }
  if (seen != expected) throw DomainError("count table is incomplete");
  return table;
}

}  // namespace hyperconn::enumeration
