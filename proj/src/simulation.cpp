#include "hyperconn/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "json.hpp"

#include "hyperconn/errors.hpp"
#include "hyperconn/version.hpp"

namespace hyperconn::simulation {

namespace {

// Largest edge universe we are willing to walk in full for complement sampling.
constexpr std::uint64_t kCompleteWalkCap = std::uint64_t{1} << 28;

std::uint64_t small_binom(std::uint64_t v, int k) {
  if (v < static_cast<std::uint64_t>(k)) return 0;
  unsigned __int128 out = 1;
  for (int i = 0; i < k; ++i) out = out * (v - i) / static_cast<unsigned>(i + 1);
  return static_cast<std::uint64_t>(out);
}

// Hash key of a sorted edge: base-n digits when n^r fits, else colex rank.
class EdgeKey {
 public:
  EdgeKey(std::int64_t n, int r) : n_(static_cast<std::uint64_t>(n)), r_(r) {
    long double span = 1.0L;
    for (int i = 0; i < r; ++i) span *= static_cast<long double>(n);
    packed_ = span < 9.2e18L;
  }
  std::uint64_t operator()(const std::uint32_t* e) const {
    if (!packed_) return colex_rank({e, static_cast<std::size_t>(r_)});
    std::uint64_t key = 0;
    for (int i = r_ - 1; i >= 0; --i) key = key * n_ + e[i];
    return key;
  }

 private:
  std::uint64_t n_;
  int r_;
  bool packed_ = true;
};

// Open addressing over 64-bit keys; clearing touches only occupied slots.
class EdgeSet {
 public:
  void prepare(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < 2 * expected + 16) cap <<= 1;
    if (cap > slots_.size()) {
      slots_.assign(cap, 0);
      used_.clear();
    }
    mask_ = slots_.size() - 1;
  }
  bool insert(std::uint64_t key) {
    const std::uint64_t stored = key + 1;
    std::size_t i = rng::mix64(key) & mask_;
    while (slots_[i] != 0) {
      if (slots_[i] == stored) return false;
      i = (i + 1) & mask_;
    }
    slots_[i] = stored;
    used_.push_back(static_cast<std::uint32_t>(i));
    return true;
  }
  [[nodiscard]] bool contains(std::uint64_t key) const {
    const std::uint64_t stored = key + 1;
    std::size_t i = rng::mix64(key) & mask_;
    while (slots_[i] != 0) {
      if (slots_[i] == stored) return true;
      i = (i + 1) & mask_;
    }
    return false;
  }
  void clear() {
    for (auto i : used_) slots_[i] = 0;
    used_.clear();
  }

 private:
  std::vector<std::uint64_t> slots_;
  std::vector<std::uint32_t> used_;
  std::size_t mask_ = 0;
};

// Floyd's algorithm: a uniform r-subset of [0, n) in r draws, sorted.
void random_rset(std::uint64_t n, int r, rng::Engine& eng, std::uint32_t* out) {
  int count = 0;
  for (std::uint64_t j = n - r; j < n; ++j) {
    const auto t = static_cast<std::uint32_t>(rng::uniform_below(eng, j + 1));
    const bool taken = std::find(out, out + count, t) != out + count;
    out[count++] = taken ? static_cast<std::uint32_t>(j) : t;
  }
  for (int i = 1; i < r; ++i) {
    const std::uint32_t v = out[i];
    int k = i;
    for (; k > 0 && out[k - 1] > v; --k) out[k] = out[k - 1];
    out[k] = v;
  }
}

}  // namespace

double p_from_d(int r, std::int64_t n, double d) {
  if (r < 2 || n < r) throw DomainError("need r >= 2 and n >= r");
  if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("d must be >= 0");
  const double p = d * std::exp(std::lgamma(double(r)) - double(r - 1) * std::log(double(n)));
  if (p > 1.0) throw DomainError("p = d (r-1)!/n^(r-1) = " + std::to_string(p) + " exceeds 1");
  return p;
}

std::uint64_t edge_universe(std::int64_t n, int r) {
  if (r < 1 || n < 0) throw DomainError("need r >= 1 and n >= 0");
  if (n > std::int64_t{0xFFFFFFFF}) throw DomainError("n too large for 32-bit vertex labels");
  unsigned __int128 out = 1;
  for (int i = 0; i < r; ++i) {
    out = out * static_cast<unsigned __int128>(n - i) / static_cast<unsigned>(i + 1);
    if (out > (static_cast<unsigned __int128>(1) << 63)) throw DomainError("binom(n, r) exceeds 2^63");
  }
  return n < r ? 0 : static_cast<std::uint64_t>(out);
}

Hypergraph::Hypergraph(std::int64_t n, int r) : n_(n), r_(r) {
  if (r < 2) throw DomainError("uniformity r must be >= 2");
  if (n < 0 || n > std::int64_t{0xFFFFFFFF}) throw DomainError("vertex count out of range");
}

void Hypergraph::push_edge(std::span<const std::uint32_t> e) {
  if (static_cast<int>(e.size()) != r_) throw DomainError("edge has wrong size");
  for (int i = 0; i < r_; ++i) {
    if (e[i] >= n_ || (i > 0 && e[i] <= e[i - 1])) throw DomainError("edge must be strictly increasing and < n");
  }
  vertices_.insert(vertices_.end(), e.begin(), e.end());
}

std::uint64_t colex_rank(std::span<const std::uint32_t> e) {
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < e.size(); ++i) rank += small_binom(e[i], static_cast<int>(i + 1));
  return rank;
}

void colex_unrank(std::uint64_t rank, int r, std::span<std::uint32_t> out) {
  for (int i = r; i >= 1; --i) {
    // largest v with binom(v, i) <= rank
    std::uint64_t lo = static_cast<std::uint64_t>(i - 1), hi = lo + 1;
    while (small_binom(hi, i) <= rank) hi *= 2;
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      (small_binom(mid, i) <= rank ? lo : hi) = mid;
    }
    out[i - 1] = static_cast<std::uint32_t>(lo);
    rank -= small_binom(lo, i);
  }
}

std::int64_t BinAxis::lower(std::int64_t i) const {
  return static_cast<std::int64_t>(std::ceil(mu + (double(i) - 0.5) * width));
}

std::int64_t BinAxis::index(std::int64_t x) const {
  auto i = static_cast<std::int64_t>(std::floor((double(x) - mu) / width + 0.5));
  while (x < lower(i)) --i;
  while (x >= lower(i + 1)) ++i;
  return i;
}

// --- workspace -------------------------------------------------------------------

struct Workspace::Impl {
  EdgeSet set;
  std::vector<std::uint32_t> parent, size, edges_of, stamp;
  std::uint32_t generation = 0;
  struct Comp {
    std::int64_t vertices, edges;
  };
  std::vector<Comp> comps;

  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }

  // Appends every edge of K^r_n not in `excluded`, walking the universe in colex order.
  void complement_walk(std::int64_t n, int r, const EdgeKey& key, Hypergraph& out) {
    std::vector<std::uint32_t> e(static_cast<std::size_t>(r));
    std::iota(e.begin(), e.end(), 0u);
    while (e[r - 1] < n) {
      if (!set.contains(key(e.data()))) out.append_unchecked(e.data());
      int i = 0;
      while (i + 1 < r && e[i] + 1 == e[i + 1]) ++i;
      ++e[i];
      for (int k = 0; k < i; ++k) e[k] = static_cast<std::uint32_t>(k);
    }
  }

  void sample_distinct(std::int64_t n, int r, std::uint64_t universe, std::uint64_t count, rng::Engine& eng,
                       Hypergraph& out) {
    out.clear();
    const EdgeKey key(n, r);
    std::uint32_t e[64];
    set.clear();
    if (count > universe / 2) {
      if (universe > kCompleteWalkCap) throw DomainError("dense sample exceeds the complete-walk cap");
      set.prepare(universe - count);
      for (std::uint64_t placed = 0; placed < universe - count;) {
        random_rset(static_cast<std::uint64_t>(n), r, eng, e);
        placed += set.insert(key(e));
      }
      out.reserve(count);
      complement_walk(n, r, key, out);
    } else {
      set.prepare(count);
      out.reserve(count);
      for (std::uint64_t placed = 0; placed < count;) {
        random_rset(static_cast<std::uint64_t>(n), r, eng, e);
        if (set.insert(key(e))) {
          out.append_unchecked(e);
          ++placed;
        }
      }
    }
    set.clear();
  }
};

Workspace::Workspace() : impl_(new Impl) {}
Workspace::~Workspace() { delete impl_; }
Workspace::Workspace(Workspace&& other) noexcept : impl_(other.impl_) { other.impl_ = nullptr; }
Workspace& Workspace::operator=(Workspace&& other) noexcept {
  std::swap(impl_, other.impl_);
  return *this;
}

void Workspace::sample_gnp(int r, std::int64_t n, double p, rng::Engine& eng, Hypergraph& out) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
  if (out.n() != n || out.r() != r) out = Hypergraph(n, r);
  if (r > 64) throw DomainError("r > 64 unsupported");
  const std::uint64_t universe = edge_universe(n, r);
  const std::uint64_t count = rng::binomial(eng, universe, p);
  impl_->sample_distinct(n, r, universe, count, eng, out);
}

void Workspace::sample_gsm(int r, std::int64_t s, std::int64_t m, rng::Engine& eng, Hypergraph& out) {
  if (out.n() != s || out.r() != r) out = Hypergraph(s, r);
  if (r > 64) throw DomainError("r > 64 unsupported");
  const std::uint64_t universe = edge_universe(s, r);
  if (m < 0 || static_cast<std::uint64_t>(m) > universe) throw DomainError("m must lie in [0, binom(s, r)]");
  impl_->sample_distinct(s, r, universe, static_cast<std::uint64_t>(m), eng, out);
}

void Workspace::components(const Hypergraph& h, int k_cap, ComponentSummary& out, bool keep_sizes) {
  if (k_cap < 0) throw DomainError("k_cap must be >= 0");
  Impl& w = *impl_;
  const auto n = static_cast<std::size_t>(h.n());
  const int r = h.r();
  w.parent.resize(n);
  w.size.assign(n, 1);
  w.edges_of.assign(n, 0);
  std::iota(w.parent.begin(), w.parent.end(), 0u);
  if (w.stamp.size() != n || ++w.generation == 0) {
    w.stamp.assign(n, 0);
    w.generation = 1;
  }

  const std::size_t m = h.edge_count();
  for (std::size_t i = 0; i < m; ++i) {
    const auto e = h.edge(i);
    for (int k = 1; k < r; ++k) w.unite(e[0], e[k]);
  }
  for (std::size_t i = 0; i < m; ++i) ++w.edges_of[w.find(h.edge(i)[0])];

  // First visits happen in order of each component's smallest vertex.
  w.comps.clear();
  std::size_t largest = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    const std::uint32_t root = w.find(v);
    if (w.stamp[root] == w.generation) continue;
    w.stamp[root] = w.generation;
    w.comps.push_back({w.size[root], w.edges_of[root]});
    if (w.comps.back().vertices > w.comps[largest].vertices) largest = w.comps.size() - 1;
  }

  out = ComponentSummary{};
  out.tree_counts.assign(static_cast<std::size_t>(k_cap) + 1, 0);
  if (w.comps.empty()) return;
  out.L1 = w.comps[largest].vertices;
  out.M1 = w.comps[largest].edges;
  const std::int64_t mid_floor = std::int64_t{k_cap} * (r - 1) + 1;
  for (std::size_t c = 0; c < w.comps.size(); ++c) {
    const auto [v, e] = w.comps[c];
    const bool tree = v == 1 + std::int64_t{r - 1} * e;
    if (tree && e <= k_cap) ++out.tree_counts[static_cast<std::size_t>(e)];
    if (v == 1) ++out.isolated_count;
    if (c == largest) continue;
    out.second_largest = std::max(out.second_largest, v);
    if (!tree) ++out.non_tree_small_count;
    if (v > mid_floor && 2 * v <= h.n()) ++out.mid_size_count;
  }
  if (keep_sizes) {
    out.component_sizes.reserve(w.comps.size());
    for (const auto& c : w.comps) out.component_sizes.push_back(c.vertices);
    std::sort(out.component_sizes.begin(), out.component_sizes.end(), std::greater<>());
  }
}

Hypergraph sample_gnp(int r, std::int64_t n, double p, rng::Engine& eng) {
  Workspace ws;
  Hypergraph h(n, r);
  ws.sample_gnp(r, n, p, eng, h);
  return h;
}

Hypergraph sample_gsm(int r, std::int64_t s, std::int64_t m, rng::Engine& eng) {
  Workspace ws;
  Hypergraph h(s, r);
  ws.sample_gsm(r, s, m, eng, h);
  return h;
}

ComponentSummary components(const Hypergraph& h, int k_cap) {
  Workspace ws;
  ComponentSummary out;
  ws.components(h, k_cap, out);
  return out;
}

// --- batches -------------------------------------------------------------------

std::string_view to_string(Model model) { return model == Model::Gnp ? "gnp" : "gsm"; }

int default_threads() {
  if (const char* env = std::getenv("HYPERCONN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

TrialBatch run_batch(const BatchParams& params) {
  if (params.trials < 1) throw DomainError("trials must be >= 1");
  if (params.k_cap < 0) throw DomainError("k_cap must be >= 0");
  if (params.trials > 100'000'000) throw BudgetExceeded("more than 1e8 trials requested");
  const int r = params.r;
  double p = 0.0;
  if (params.model == Model::Gnp) {
    p = p_from_d(r, params.n, params.d);
  } else {
    const std::uint64_t universe = edge_universe(params.n, r);
    if (params.m < 0 || static_cast<std::uint64_t>(params.m) > universe)
      throw DomainError("m must lie in [0, binom(s, r)]");
  }
  (void)edge_universe(params.n, r);

  TrialBatch batch;
  batch.params = params;
  const auto trials = static_cast<std::size_t>(params.trials);
  const std::size_t row = static_cast<std::size_t>(params.k_cap) + 1;
  batch.trials.resize(trials);
  batch.tree_counts.assign(trials * row, 0);

  int threads = params.threads > 0 ? params.threads : default_threads();
  threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), trials));
  batch.threads_used = threads;

  std::atomic<std::size_t> next{0};
  constexpr std::size_t kChunk = 16;
  auto worker = [&]() {
    Workspace ws;
    Hypergraph h(params.n, r);
    ComponentSummary summary;
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= trials) return;
      const std::size_t end = std::min(trials, begin + kChunk);
      for (std::size_t i = begin; i < end; ++i) {
        auto eng = rng::Engine::for_stream(params.master_seed, i);
        if (params.model == Model::Gnp)
          ws.sample_gnp(r, params.n, p, eng, h);
        else
          ws.sample_gsm(r, params.n, params.m, eng, h);
        ws.components(h, params.k_cap, summary, false);
        TrialRecord& rec = batch.trials[i];
        rec.L1 = summary.L1;
        rec.M1 = summary.M1;
        rec.edges = static_cast<std::int64_t>(h.edge_count());
        rec.second_largest = summary.second_largest;
        rec.non_tree_small = summary.non_tree_small_count;
        rec.mid_size = summary.mid_size_count;
        std::copy(summary.tree_counts.begin(), summary.tree_counts.end(), batch.tree_counts.begin() + i * row);
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        try {
          worker();
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(trials);
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Aggregation in trial order, independent of scheduling.
  const double nt = double(trials);
  Moments& mo = batch.moments;
  for (const auto& t : batch.trials) {
    mo.mean_L += double(t.L1);
    mo.mean_M += double(t.M1);
    mo.mean_edges += double(t.edges);
  }
  mo.mean_L /= nt;
  mo.mean_M /= nt;
  mo.mean_edges /= nt;
  if (trials > 1) {
    for (const auto& t : batch.trials) {
      const double dl = double(t.L1) - mo.mean_L, dm = double(t.M1) - mo.mean_M, de = double(t.edges) - mo.mean_edges;
      mo.var_L += dl * dl;
      mo.var_M += dm * dm;
      mo.cov_LM += dl * dm;
      mo.var_edges += de * de;
    }
    mo.var_L /= nt - 1.0;
    mo.var_M /= nt - 1.0;
    mo.cov_LM /= nt - 1.0;
    mo.var_edges /= nt - 1.0;
  }

  batch.tree_mean.assign(row, 0.0);
  batch.tree_var.assign(row, 0.0);
  for (std::size_t i = 0; i < trials; ++i)
    for (std::size_t k = 0; k < row; ++k) batch.tree_mean[k] += double(batch.tree_counts[i * row + k]);
  for (auto& v : batch.tree_mean) v /= nt;
  if (trials > 1) {
    for (std::size_t i = 0; i < trials; ++i)
      for (std::size_t k = 0; k < row; ++k) {
        const double dv = double(batch.tree_counts[i * row + k]) - batch.tree_mean[k];
        batch.tree_var[k] += dv * dv;
      }
    for (auto& v : batch.tree_var) v /= nt - 1.0;
  }

  if (params.model == Model::Gnp && (r - 1) * params.d > 1.0) {
    batch.llt = analytic::llt_parameters(analytic::Uniformity(r), params.n, params.d);
    batch.axis_L = {batch.llt->mu_L, 0.5 * std::sqrt(batch.llt->sigma_L2)};
    batch.axis_M = {batch.llt->mu_M, 0.5 * std::sqrt(batch.llt->sigma_M2)};
    for (const auto& t : batch.trials) ++batch.joint_bins[{batch.axis_L.index(t.L1), batch.axis_M.index(t.M1)}];
  }
  return batch;
}

std::string to_json(const TrialBatch& batch, bool include_trials) {
  using nlohmann::ordered_json;
  const auto& p = batch.params;
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["tool_version"] = std::string(kVersion);
  j["rng"] = std::string(rng::kAlgorithmId);
  ordered_json params;
  params["model"] = std::string(to_string(p.model));
  params["r"] = p.r;
  params[p.model == Model::Gnp ? "n" : "s"] = p.n;
  if (p.model == Model::Gnp)
    params["d"] = p.d;
  else
    params["m"] = p.m;
  params["trials"] = p.trials;
  params["master_seed"] = p.master_seed;
  params["k_cap"] = p.k_cap;
  j["params"] = params;
  const auto& mo = batch.moments;
  j["moments"] = {{"mean_L1", mo.mean_L},     {"mean_M1", mo.mean_M},   {"var_L1", mo.var_L},
                  {"var_M1", mo.var_M},       {"cov_L1_M1", mo.cov_LM}, {"mean_edges", mo.mean_edges},
                  {"var_edges", mo.var_edges}};
  j["tree_census"] = {{"mean", batch.tree_mean}, {"var", batch.tree_var}};
  if (batch.llt) {
    const auto& l = *batch.llt;
    j["llt"] = {{"mu_L", l.mu_L}, {"mu_M", l.mu_M}, {"sigma_L2", l.sigma_L2}, {"sigma_M2", l.sigma_M2}, {"xi", l.xi}};
    j["bins"]["width_L"] = batch.axis_L.width;
    j["bins"]["width_M"] = batch.axis_M.width;
    ordered_json cells = ordered_json::array();
    for (const auto& [key, count] : batch.joint_bins) cells.push_back({key.first, key.second, count});
    j["bins"]["cells"] = cells;
  }
  if (include_trials) {
    ordered_json rows = ordered_json::array();
    for (const auto& t : batch.trials) rows.push_back({t.L1, t.M1, t.edges});
    j["trials"] = rows;
  }
  return j.dump(2);
}

}  // namespace hyperconn::simulation
