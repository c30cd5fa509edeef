#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hyperconn/analytic.hpp"
#include "hyperconn/branching.hpp"
#include "hyperconn/enumeration.hpp"
#include "hyperconn/errors.hpp"
#include "hyperconn/simulation.hpp"
#include "hyperconn/stats.hpp"
#include "hyperconn/version.hpp"

namespace py = pybind11;
using namespace hyperconn;
using analytic::Uniformity;

namespace {

py::dict estimate_dict(const analytic::LogEstimate& e) {
  py::dict d;
  d["log_value"] = e.log_value;
  d["regime"] = std::string(analytic::to_string(e.regime));
  d["dbar"] = e.dbar;
  d["log_G"] = e.components.log_G;
  d["minus_sF"] = e.components.minus_sF;
  d["prefactor"] = e.components.prefactor;
  d["not_asymptotic"] = e.not_asymptotic;
  d["g_shortcut"] = e.g_shortcut;
  d["capped"] = e.capped;
  d["validity_warning"] = e.validity_warning;
  return d;
}

simulation::BatchParams batch_params(int r, std::int64_t n, double d, std::int64_t trials, std::uint64_t seed,
                                     int threads) {
  simulation::BatchParams p;
  p.r = r;
  p.n = n;
  p.d = d;
  p.trials = trials;
  p.master_seed = seed;
  p.threads = threads;
  return p;
}

}  // namespace

PYBIND11_MODULE(_hyperconn, m) {
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<BudgetExceeded>(m, "BudgetExceeded");
  py::register_exception<NotApplicable>(m, "NotApplicable");
  py::register_exception<InsufficientData>(m, "InsufficientData");
  py::register_exception<ConvergenceError>(m, "ConvergenceError");

  m.def(
      "solve_dbar",
      [](int r, double dbar) {
        const auto fp = analytic::solve_xi_from_dbar(Uniformity(r), dbar);
        return py::dict(py::arg("xi") = fp.xi, py::arg("rho") = fp.rho, py::arg("log_xi") = fp.log_xi);
      },
      py::arg("r"), py::arg("dbar"), "xi in (0,1) with Phi_r(xi) = dbar");
  m.def(
      "solve_d",
      [](int r, double d) {
        const auto bp = analytic::solve_xi_from_d(Uniformity(r), d);
        return py::dict(py::arg("xi") = bp.xi, py::arg("d_star") = bp.d_star);
      },
      py::arg("r"), py::arg("d"), "Extinction probability of the offspring process with mean degree d");
  m.def("F", [](int r, double dbar) { return analytic::F(Uniformity(r), dbar); }, py::arg("r"), py::arg("dbar"));
  m.def("G", [](int r, double dbar) { return analytic::G(Uniformity(r), dbar); }, py::arg("r"), py::arg("dbar"));
  m.def(
      "log_P_universal",
      [](int r, std::int64_t s, std::int64_t mm) {
        return estimate_dict(analytic::log_P_universal(Uniformity(r), s, mm));
      },
      py::arg("r"), py::arg("s"), py::arg("m"));
  m.def(
      "log_P_dense", [](int r, std::int64_t s, std::int64_t mm) { return analytic::log_P_dense(Uniformity(r), s, mm); },
      py::arg("r"), py::arg("s"), py::arg("m"));
  m.def("bcm_log_P", &analytic::bcm_log_P, py::arg("s"), py::arg("m"));

  m.def(
      "connected_count",
      [](int r, int s, std::int64_t mm) {
        const auto t = enumeration::exact_connected_table(r, s);
        return py::int_(py::str(t.at(s, mm).get_str()));
      },
      py::arg("r"), py::arg("s"), py::arg("m"), "Exact number of connected r-uniform hypergraphs");
  m.def(
      "exact_log_P",
      [](int r, int s, std::int64_t mm) {
        return enumeration::exact_log_P(enumeration::exact_connected_table(r, s), s, mm);
      },
      py::arg("r"), py::arg("s"), py::arg("m"));

  m.def("pi_k", &branching::pi_k, py::arg("r"), py::arg("d"), py::arg("k"));
  m.def(
      "tree_count", [](int r, std::int64_t k) { return py::int_(py::str(branching::tree_count(r, k).get_str())); },
      py::arg("r"), py::arg("k"));

  m.def(
      "sample_batch_json",
      [](int r, std::int64_t n, double d, std::int64_t trials, std::uint64_t seed, int threads) {
        py::gil_scoped_release release;
        return simulation::to_json(simulation::run_batch(batch_params(r, n, d, trials, seed, threads)));
      },
      py::arg("r"), py::arg("n"), py::arg("d"), py::arg("trials"), py::arg("seed") = 0, py::arg("threads") = 0);
  m.def(
      "llt_check_json",
      [](int r, std::int64_t n, double d, std::int64_t trials, std::uint64_t seed, int threads) {
        py::gil_scoped_release release;
        return stats::render_json(stats::llt_check(simulation::run_batch(batch_params(r, n, d, trials, seed, threads))));
      },
      py::arg("r"), py::arg("n"), py::arg("d"), py::arg("trials"), py::arg("seed") = 0, py::arg("threads") = 0);
  m.def(
      "connectivity_check_json",
      [](int r, std::int64_t s, std::int64_t mm, std::int64_t trials, std::uint64_t seed, int threads) {
        py::gil_scoped_release release;
        stats::ConnectivityParams p;
        p.r = r;
        p.s = s;
        p.m = mm;
        p.trials = trials;
        p.seed = seed;
        p.threads = threads;
        return stats::render_json(stats::connectivity_check(p));
      },
      py::arg("r"), py::arg("s"), py::arg("m"), py::arg("trials"), py::arg("seed") = 0, py::arg("threads") = 0);
}
