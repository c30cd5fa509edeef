// hyperconn: command-line front end.
//
// Exit codes: 0 success, 1 a statistical check failed, 2 usage or domain
// error, 3 budget exceeded.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "hyperconn/analytic.hpp"
#include "hyperconn/branching.hpp"
#include "hyperconn/enumeration.hpp"
#include "hyperconn/errors.hpp"
#include "hyperconn/simulation.hpp"
#include "hyperconn/stats.hpp"
#include "hyperconn/version.hpp"

using namespace hyperconn;
using json = nlohmann::ordered_json;

namespace {

enum class Format { Csv, Json, Human };

struct Common {
  Format format = Format::Csv;
  int threads = 0;
};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// A flat record rendered as one CSV row, a JSON object or aligned text.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void meta(std::string key, std::string value) { meta_.emplace_back(std::move(key), std::move(value)); }
  void row(std::vector<std::string> values) { rows_.push_back(std::move(values)); }

  void print(Format f) const {
    if (f == Format::Csv) {
      for (const auto& [k, v] : meta_) std::cout << "# " << k << "=" << v << '\n';
      print_line(columns_);
      for (const auto& r : rows_) print_line(r);
    } else if (f == Format::Json) {
      json out;
      for (const auto& [k, v] : meta_) out[k] = v;
      json rows = json::array();
      for (const auto& r : rows_) {
        json o;
        for (std::size_t i = 0; i < columns_.size(); ++i) o[columns_[i]] = r[i];
        rows.push_back(o);
      }
      out["rows"] = rows;
      std::cout << out.dump(2) << '\n';
    } else {
      for (const auto& [k, v] : meta_) std::cout << k << ": " << v << '\n';
      for (const auto& r : rows_) {
        for (std::size_t i = 0; i < columns_.size(); ++i) std::cout << "  " << columns_[i] << " = " << r[i] << '\n';
        if (rows_.size() > 1) std::cout << '\n';
      }
    }
  }

 private:
  static void print_line(const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? "," : "") << v[i];
    std::cout << '\n';
  }
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<std::string>> rows_;
};

int print_report(const stats::CheckReport& rep, Format f) {
  if (f == Format::Human)
    std::cout << stats::render_human(rep);
  else
    std::cout << stats::render_json(rep) << '\n';
  return rep.passed() ? 0 : 1;
}

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stoll(item, &used));
    if (used != item.size()) throw DomainError("bad list item: " + item);
  }
  if (out.empty()) throw DomainError("empty list");
  return out;
}

void stamp(Table& t, bool stochastic = false, std::optional<std::uint64_t> seed = std::nullopt) {
  t.meta("tool_version", std::string(kVersion));
  if (stochastic) {
    t.meta("rng", std::string(rng::kAlgorithmId));
    if (seed) t.meta("seed", std::to_string(*seed));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperconn: connectivity of random r-uniform hypergraphs"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  const std::map<std::string, Format> formats{{"csv", Format::Csv}, {"json", Format::Json}, {"human", Format::Human}};
  app.add_option("--format", common.format, "Output format: csv, json or human")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  app.add_option("--threads", common.threads, "Worker threads (default: HYPERCONN_THREADS, else all cores)")
      ->check(CLI::PositiveNumber);

  int rc = 0;

  // solve
  int solve_r = 3;
  std::optional<double> solve_dbar, solve_d;
  auto* solve = app.add_subcommand("solve", "Fixed point xi from dbar or from d.\n"
                                            "CSV columns: r,input,value,xi,rho,d_star,residual");
  solve->add_option("--r", solve_r, "Edge size")->required();
  auto* o_dbar = solve->add_option("--dbar", solve_dbar, "Average degree of H^r(s, m)");
  auto* o_d = solve->add_option("--d", solve_d, "Branching parameter of H^r(n, p)");
  o_dbar->excludes(o_d);
  solve->callback([&] {
    const analytic::Uniformity r(solve_r);
    Table t({"r", "input", "value", "xi", "rho", "d_star", "residual"});
    stamp(t);
    if (solve_dbar) {
      const auto fp = analytic::solve_xi_from_dbar(r, *solve_dbar);
      const double d = analytic::d_from_xi(r, fp.xi);
      const double resid = analytic::phi_of_log(r, fp.log_xi) / *solve_dbar - 1.0;
      t.row({std::to_string(solve_r), "dbar", num(*solve_dbar), num(fp.xi), num(fp.rho),
             num(d * std::pow(fp.xi, solve_r - 1)), num(resid)});
    } else if (solve_d) {
      const auto bp = analytic::solve_xi_from_d(r, *solve_d);
      const double resid = bp.xi - std::exp(-bp.d * (1.0 - std::pow(bp.xi, solve_r - 1)));
      t.row({std::to_string(solve_r), "d", num(*solve_d), num(bp.xi), num(1.0 - bp.xi), num(bp.d_star), num(resid)});
    } else {
      throw CLI::ValidationError("solve", "one of --dbar or --d is required");
    }
    t.print(common.format);
  });

  // prob
  int prob_r = 3;
  std::int64_t prob_s = 0, prob_m = 0;
  std::string prob_form = "universal";
  std::string prob_table;
  auto* prob = app.add_subcommand("prob", "Connectivity probability P_r(s, m).\n"
                                          "CSV columns: r,s,m,form,dbar,log_P,P,regime,flags");
  prob->add_option("--r", prob_r)->required();
  prob->add_option("--s", prob_s)->required();
  prob->add_option("--m", prob_m)->required();
  prob->add_option("--form", prob_form, "universal, dense, bcm or exact")
      ->check(CLI::IsMember({"universal", "dense", "bcm", "exact"}));
  prob->add_option("--table", prob_table, "Count table file for --form exact");
  prob->callback([&] {
    const analytic::Uniformity r(prob_r);
    Table t({"r", "s", "m", "form", "dbar", "log_P", "P", "regime", "flags"});
    stamp(t);
    const double dbar = double(prob_r) * double(prob_m) / double(prob_s);
    double lp = 0.0;
    std::string regime = "-", flags;
    if (prob_form == "universal") {
      const auto est = analytic::log_P_universal(r, prob_s, prob_m);
      lp = est.log_value;
      regime = std::string(analytic::to_string(est.regime));
      if (est.not_asymptotic) flags += "not_asymptotic;";
      if (est.g_shortcut) flags += "g_shortcut;";
      if (est.capped) flags += "capped;";
    } else if (prob_form == "dense") {
      lp = analytic::log_P_dense(r, prob_s, prob_m);
    } else if (prob_form == "bcm") {
      if (prob_r != 2) throw DomainError("the BCM form is for r = 2");
      lp = analytic::bcm_log_P(prob_s, prob_m);
    } else {
      std::optional<enumeration::CountTable> table;
      if (!prob_table.empty()) {
        std::ifstream in(prob_table);
        if (!in) throw DomainError("cannot open " + prob_table);
        table = enumeration::read_table(in);
        if (table->r() != prob_r) throw DomainError("table is for a different r");
      } else {
        table = enumeration::exact_connected_table(prob_r, static_cast<int>(prob_s));
      }
      lp = enumeration::exact_log_P(*table, prob_s, prob_m);
    }
    if (!flags.empty()) flags.pop_back();
    t.row({std::to_string(prob_r), std::to_string(prob_s), std::to_string(prob_m), prob_form, num(dbar), num(lp),
           num(std::exp(lp)), regime, flags});
    t.print(common.format);
  });

  // count
  int count_r = 3;
  std::int64_t count_s = 0, count_m = 0;
  bool count_exact = false;
  std::string count_form = "exact-binomial";
  auto* count = app.add_subcommand("count", "Number C_r(s, m) of connected hypergraphs.\n"
                                            "CSV columns: r,s,m,method,log_C,C");
  count->add_option("--r", count_r)->required();
  count->add_option("--s", count_s)->required();
  count->add_option("--m", count_m)->required();
  count->add_flag("--exact", count_exact, "Exact integer from the recurrence");
  count->add_option("--form", count_form, "Asymptotic form: exact-binomial or stirling")
      ->check(CLI::IsMember({"exact-binomial", "stirling"}));
  count->callback([&] {
    Table t({"r", "s", "m", "method", "log_C", "C"});
    stamp(t);
    if (count_exact) {
      if (count_s < 1 || count_s > 1000) throw DomainError("s out of range");
      const auto table = enumeration::exact_connected_table(count_r, static_cast<int>(count_s));
      const BigCount& c = table.at(count_s, count_m);
      t.row({std::to_string(count_r), std::to_string(count_s), std::to_string(count_m), "exact",
             num(sgn(c) > 0 ? log_big(c) : -INFINITY), to_decimal(c)});
    } else {
      const auto form =
          count_form == "stirling" ? analytic::CountForm::Stirling : analytic::CountForm::ExactBinomial;
      const auto est = analytic::log_C_asymptotic(analytic::Uniformity(count_r), count_s, count_m, form);
      t.row({std::to_string(count_r), std::to_string(count_s), std::to_string(count_m), count_form,
             num(est.log_value), "-"});
    }
    t.print(common.format);
  });

  // batch-style commands share these
  struct BatchOpts {
    int r = 3;
    std::int64_t n = 0;
    double d = 0.0;
    std::int64_t m = -1;
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    int k_cap = 20;
  };

  // sample
  BatchOpts so;
  std::string sample_model = "gnp";
  bool sample_trials_out = false;
  auto* sample = app.add_subcommand("sample", "Sample H^r(n, p) or H^r(s, m) and summarise components.\n"
                                              "CSV columns: trial,L1,M1,edges,second_largest,non_tree_small");
  sample->add_option("--model", sample_model)->check(CLI::IsMember({"gnp", "gsm"}));
  sample->add_option("--r", so.r)->required();
  sample->add_option("--n", so.n, "Vertex count (n or s)")->required();
  sample->add_option("--d", so.d, "Branching parameter (gnp)");
  sample->add_option("--m", so.m, "Edge count (gsm)");
  sample->add_option("--trials", so.trials);
  sample->add_option("--seed", so.seed)->required();
  sample->add_option("--k-cap", so.k_cap);
  sample->add_flag("--per-trial", sample_trials_out, "Include per-trial records in JSON output");
  sample->callback([&] {
    simulation::BatchParams bp;
    bp.model = sample_model == "gsm" ? simulation::Model::Gsm : simulation::Model::Gnp;
    if (bp.model == simulation::Model::Gsm && so.m < 0) throw DomainError("--m is required for gsm");
    bp.r = so.r;
    bp.n = so.n;
    bp.d = so.d;
    bp.m = so.m;
    bp.trials = so.trials;
    bp.master_seed = so.seed;
    bp.k_cap = so.k_cap;
    bp.threads = common.threads;
    const auto batch = simulation::run_batch(bp);
    if (common.format == Format::Json) {
      std::cout << simulation::to_json(batch, sample_trials_out) << '\n';
      return;
    }
    Table t({"trial", "L1", "M1", "edges", "second_largest", "non_tree_small"});
    stamp(t, true, so.seed);
    for (std::size_t i = 0; i < batch.trials.size(); ++i) {
      const auto& tr = batch.trials[i];
      t.row({std::to_string(i), std::to_string(tr.L1), std::to_string(tr.M1), std::to_string(tr.edges),
             std::to_string(tr.second_largest), std::to_string(tr.non_tree_small)});
    }
    t.print(common.format);
  });

  // llt / census
  BatchOpts lo, co;
  int census_kmax = 4;
  auto add_gnp_opts = [](CLI::App* sub, BatchOpts& o) {
    sub->add_option("--r", o.r)->required();
    sub->add_option("--n", o.n)->required();
    sub->add_option("--d", o.d)->required();
    sub->add_option("--trials", o.trials)->required();
    sub->add_option("--seed", o.seed)->required();
  };
  auto gnp_batch = [&](const BatchOpts& o) {
    simulation::BatchParams bp;
    bp.r = o.r;
    bp.n = o.n;
    bp.d = o.d;
    bp.trials = o.trials;
    bp.master_seed = o.seed;
    bp.k_cap = o.k_cap;
    bp.threads = common.threads;
    return bp;
  };
  auto* llt = app.add_subcommand("llt", "Local limit check of (L1, M1) in H^r(n, p). Output: check report.");
  add_gnp_opts(llt, lo);
  llt->callback([&] {
    if (common.format == Format::Csv) common.format = Format::Json;
    rc = print_report(stats::llt_check(simulation::run_batch(gnp_batch(lo))), common.format);
  });
  auto* census = app.add_subcommand("census", "Tree component census of H^r(n, p). Output: check report.");
  add_gnp_opts(census, co);
  census->add_option("--k-max", census_kmax);
  census->callback([&] {
    if (common.format == Format::Csv) common.format = Format::Json;
    co.k_cap = std::max(co.k_cap, census_kmax);
    rc = print_report(stats::tree_census_check(simulation::run_batch(gnp_batch(co)), census_kmax), common.format);
  });

  // connect
  int cn_r = 3;
  std::int64_t cn_s = 0, cn_m = 0, cn_trials = 0;
  std::uint64_t cn_seed = 0;
  std::string cn_pred = "universal";
  auto* connect = app.add_subcommand("connect", "Monte Carlo connectivity of H^r(s, m) vs a prediction.");
  connect->add_option("--r", cn_r)->required();
  connect->add_option("--s", cn_s)->required();
  connect->add_option("--m", cn_m)->required();
  connect->add_option("--trials", cn_trials)->required();
  connect->add_option("--seed", cn_seed)->required();
  connect->add_option("--prediction", cn_pred)->check(CLI::IsMember({"universal", "dense", "exact"}));
  connect->callback([&] {
    if (common.format == Format::Csv) common.format = Format::Json;
    stats::ConnectivityParams p;
    p.r = cn_r;
    p.s = cn_s;
    p.m = cn_m;
    p.trials = cn_trials;
    p.seed = cn_seed;
    p.threads = common.threads;
    std::optional<enumeration::CountTable> table;
    if (cn_pred == "exact") {
      table = enumeration::exact_connected_table(cn_r, static_cast<int>(cn_s));
      p.prediction = stats::Prediction::Exact;
      p.table = &*table;
    } else {
      p.prediction = cn_pred == "dense" ? stats::Prediction::Dense : stats::Prediction::Universal;
    }
    rc = print_report(stats::connectivity_check(p), common.format);
  });

  // sweep
  int sweep_r = 2;
  std::string sweep_s = "20,30,40", sweep_table;
  double sweep_dbar = 4.0;
  auto* sweep = app.add_subcommand("sweep", "Exact vs asymptotic log P along s (r = 2).\n"
                                            "CSV columns: s,m,exact,universal,bcm,delta");
  sweep->add_option("--r", sweep_r)->check(CLI::IsMember({2}));
  sweep->add_option("--s", sweep_s, "Comma-separated s values");
  sweep->add_option("--dbar", sweep_dbar);
  sweep->add_option("--table", sweep_table, "Count table file (computed when absent)");
  sweep->callback([&] {
    const auto s_list = parse_list(sweep_s);
    std::optional<enumeration::CountTable> table;
    if (!sweep_table.empty()) {
      std::ifstream in(sweep_table);
      if (!in) throw DomainError("cannot open " + sweep_table);
      table = enumeration::read_table(in);
    } else {
      table = enumeration::exact_connected_table(2, static_cast<int>(*std::max_element(s_list.begin(), s_list.end())));
    }
    const auto rep = stats::exact_vs_asymptotic_sweep(*table, s_list, sweep_dbar);
    if (common.format != Format::Csv) {
      rc = print_report(rep, common.format);
      return;
    }
    Table t({"s", "m", "exact", "universal", "bcm", "delta"});
    stamp(t);
    t.meta("dbar", num(sweep_dbar));
    for (const auto s : s_list) {
      const auto m = static_cast<std::int64_t>(std::llround(sweep_dbar * double(s) / 2.0));
      const double ex = enumeration::exact_log_P(*table, s, m);
      const double un = analytic::log_P_universal(analytic::Uniformity(2), s, m).log_value;
      t.row({std::to_string(s), std::to_string(m), num(ex), num(un), num(analytic::bcm_log_P(s, m)),
             num(std::abs(ex - un))});
    }
    t.print(common.format);
    rc = rep.passed() ? 0 : 1;
  });

  // bp
  int bp_r = 3;
  double bp_d = 5.0;
  std::int64_t bp_trials = 1000, bp_cap = 1'000'000;
  int bp_kmax = 10;
  std::uint64_t bp_seed = 0;
  auto* bp = app.add_subcommand("bp", "Simulate the branching process and tabulate edge counts.\n"
                                      "CSV columns: k,count,freq,pi_k (k = censored for the censored row)");
  bp->add_option("--r", bp_r)->required();
  bp->add_option("--d", bp_d)->required();
  bp->add_option("--trials", bp_trials);
  bp->add_option("--seed", bp_seed)->required();
  bp->add_option("--cap", bp_cap, "Edge cap before a trajectory is censored");
  bp->add_option("--k-max", bp_kmax);
  bp->callback([&] {
    if (bp_trials < 1) throw DomainError("trials must be >= 1");
    std::vector<std::int64_t> hist(static_cast<std::size_t>(bp_kmax) + 2, 0);
    std::int64_t censored = 0;
    for (std::int64_t i = 0; i < bp_trials; ++i) {
      auto eng = rng::Engine::for_stream(bp_seed, static_cast<std::uint64_t>(i));
      const auto o = branching::simulate_bp(bp_r, bp_d, eng, bp_cap);
      if (o.censored)
        ++censored;
      else
        ++hist[static_cast<std::size_t>(std::min<std::int64_t>(o.edges, bp_kmax + 1))];
    }
    Table t({"k", "count", "freq", "pi_k"});
    stamp(t, true, bp_seed);
    const double T = double(bp_trials);
    double tail = 1.0;
    for (int k = 0; k <= bp_kmax; ++k) {
      const double p = branching::pi_k(bp_r, bp_d, k);
      tail -= p;
      t.row({std::to_string(k), std::to_string(hist[k]), num(double(hist[k]) / T), num(p)});
    }
    const double xi = analytic::solve_xi_from_d(analytic::Uniformity(bp_r), bp_d).xi;
    t.row({">" + std::to_string(bp_kmax), std::to_string(hist.back()), num(double(hist.back()) / T),
           num(std::max(0.0, xi - (1.0 - tail)))});
    t.row({"censored", std::to_string(censored), num(double(censored) / T), num(1.0 - xi)});
    t.print(common.format);
  });

  // table
  int table_r = 2, table_smax = 10;
  std::string table_out;
  auto* table = app.add_subcommand("table", "Build an exact count table and write it in the versioned text format.");
  table->add_option("--r", table_r)->required();
  table->add_option("--s-max", table_smax)->required();
  table->add_option("--out", table_out, "Output file (default: stdout)");
  table->callback([&] {
    const auto t = enumeration::exact_connected_table(table_r, table_smax);
    if (table_out.empty()) {
      enumeration::write_table(std::cout, t);
    } else {
      std::ofstream out(table_out);
      if (!out) throw DomainError("cannot write " + table_out);
      enumeration::write_table(out, t);
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const NotApplicable& e) {
    std::cerr << "not applicable: " << e.what() << '\n';
    return 2;
  } catch (const InsufficientData& e) {
    std::cerr << "insufficient data: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return rc;
}
