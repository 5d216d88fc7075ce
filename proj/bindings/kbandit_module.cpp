#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kbandit/environment.hpp"
#include "kbandit/exact_posterior.hpp"
#include "kbandit/harness.hpp"
#include "kbandit/info_gain.hpp"
#include "kbandit/nystrom.hpp"
#include "kbandit/rls.hpp"

namespace py = pybind11;
using namespace kbandit;

namespace {

KernelSpec make_kernel(const std::string& family, double gamma) {
  if (family == "gaussian") return gaussian_kernel(gamma);
  if (family == "linear") return linear_kernel();
  throw std::invalid_argument("kernel family must be 'gaussian' or 'linear'");
}

py::dict trace_to_dict(const MetricsTrace& trace) {
  py::dict d;
  d["t"] = trace.t;
  d["regret"] = trace.regret;
  d["cum_regret"] = trace.cum_regret;
  d["cum_comm_scalars"] = trace.cum_scalars;
  d["gamma_hat"] = trace.gamma_hat;
  d["sync_count"] = trace.sync_count();
  py::list syncs;
  for (const SyncEvent& e : trace.syncs) {
    py::dict s;
    s["t"] = e.t;
    s["scalars"] = e.scalars;
    s["dict_size"] = e.dict_size;
    syncs.append(s);
  }
  d["syncs"] = syncs;
  d["chosen"] = trace.chosen;
  return d;
}

}  // namespace

PYBIND11_MODULE(_kbandit, m) {
  m.doc() = "Distributed kernelized contextual bandit simulator core";

  m.def(
      "kernel_eval",
      [](const std::string& family, double gamma, const Eigen::VectorXd& x,
         const Eigen::VectorXd& y) { return kernel_eval(make_kernel(family, gamma), x, y); },
      py::arg("family"), py::arg("gamma"), py::arg("x"), py::arg("y"));

  m.def(
      "kernel_matrix",
      [](const std::string& family, double gamma, const Eigen::MatrixXd& A,
         const Eigen::MatrixXd& B) { return kernel_matrix(make_kernel(family, gamma), A, B); },
      py::arg("family"), py::arg("gamma"), py::arg("a"), py::arg("b"));

  m.def(
      "information_gain",
      [](const std::string& family, double gamma, double lam, const Eigen::MatrixXd& pts) {
        return information_gain(make_kernel(family, gamma), lam, pts);
      },
      py::arg("family"), py::arg("gamma"), py::arg("lam"), py::arg("points"));

  m.def(
      "logdet_ratio",
      [](const std::string& family, double gamma, double lam, const Eigen::MatrixXd& old_pts,
         const Eigen::MatrixXd& new_pts) {
        return logdet_ratio(make_kernel(family, gamma), lam, old_pts, new_pts);
      },
      py::arg("family"), py::arg("gamma"), py::arg("lam"), py::arg("old_points"),
      py::arg("new_points"));

  m.def("f1", &f1, py::arg("x"), py::arg("theta"));
  m.def("f2", &f2, py::arg("x"), py::arg("theta"));

  m.def("qbar_from_theory", &qbar_from_theory, py::arg("epsilon"), py::arg("delta"),
        py::arg("clients"), py::arg("rounds"));

  m.def(
      "rls_sample",
      [](const std::vector<long>& indices, const std::vector<double>& variances, double qbar,
         std::uint64_t seed) {
        Rng rng(seed);
        return rls_sample(indices, variances, qbar, rng);
      },
      py::arg("indices"), py::arg("variances"), py::arg("qbar"), py::arg("seed"));

  m.def("epsilon_accuracy", &epsilon_accuracy, py::arg("features"), py::arg("weights"),
        py::arg("lam"));

  m.def("theory_alpha_exact", &theory_alpha_exact, py::arg("lam"), py::arg("theta_norm_bound"),
        py::arg("noise_r"), py::arg("delta"), py::arg("clients"), py::arg("logdet"));
  m.def("theory_alpha_approx", &theory_alpha_approx, py::arg("lam"),
        py::arg("theta_norm_bound"), py::arg("noise_r"), py::arg("delta"), py::arg("clients"),
        py::arg("epsilon"), py::arg("d_threshold"), py::arg("gamma_bound"));

  py::class_<MeanStd>(m, "MeanStd")
      .def_readonly("mean", &MeanStd::mean)
      .def_readonly("std", &MeanStd::std)
      .def("__repr__", [](const MeanStd& ms) {
        return "MeanStd(mean=" + std::to_string(ms.mean) + ", std=" + std::to_string(ms.std) +
               ")";
      });

  py::class_<ExactPosterior>(m, "ExactPosterior")
      .def(py::init([](const std::string& family, double gamma, double lam) {
             return ExactPosterior(make_kernel(family, gamma), lam);
           }),
           py::arg("family"), py::arg("gamma"), py::arg("lam"))
      .def("append", &ExactPosterior::append, py::arg("x"), py::arg("y"))
      .def("mean_std", &ExactPosterior::mean_std, py::arg("x"))
      .def("ucb", &ExactPosterior::ucb, py::arg("x"), py::arg("alpha"))
      .def("regularized_logdet", &ExactPosterior::regularized_logdet)
      .def_property_readonly("count", &ExactPosterior::count);

  py::class_<Dictionary, std::shared_ptr<Dictionary>>(m, "Dictionary")
      .def(py::init([](const std::string& family, double gamma, const Eigen::MatrixXd& feats,
                       const std::vector<long>& indices) {
             return std::make_shared<Dictionary>(make_kernel(family, gamma), feats, indices);
           }),
           py::arg("family"), py::arg("gamma"), py::arg("features"), py::arg("indices"))
      .def("embed", &Dictionary::embed, py::arg("x"))
      .def_property_readonly("size", &Dictionary::size);

  py::class_<EmbeddedStats>(m, "EmbeddedStats")
      .def(py::init<long>(), py::arg("dim"))
      .def("accumulate", &EmbeddedStats::accumulate, py::arg("z"), py::arg("y"))
      .def_readonly("gram", &EmbeddedStats::gram)
      .def_readonly("moment", &EmbeddedStats::moment)
      .def_readonly("count", &EmbeddedStats::count);

  m.def(
      "approx_mean_var",
      [](const std::shared_ptr<Dictionary>& dict, const EmbeddedStats& stats, double lam,
         const Eigen::VectorXd& x) {
        return approx_mean_var(std::shared_ptr<const Dictionary>(dict), stats, lam, x);
      },
      py::arg("dictionary"), py::arg("stats"), py::arg("lam"), py::arg("x"));

  m.def(
      "run_config_file",
      [](const std::string& path, long seed_override) {
        ExperimentConfig config = load_config(path);
        if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
        return trace_to_dict(run_single(config, config.seed));
      },
      py::arg("path"), py::arg("seed") = -1,
      "Run one replicate of the configuration file and return the trace");

  m.def(
      "run_config_text",
      [](const std::string& text, long seed_override) {
        ExperimentConfig config = config_from_kv(parse_flat_text(text));
        if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
        return trace_to_dict(run_single(config, config.seed));
      },
      py::arg("text"), py::arg("seed") = -1,
      "Run one replicate of an inline configuration and return the trace");
}
