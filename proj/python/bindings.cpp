#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "auq/bounds.hpp"
#include "auq/categorical.hpp"
#include "auq/cli.hpp"
#include "auq/dirichlet.hpp"
#include "auq/error.hpp"
#include "auq/estimators.hpp"
#include "auq/io.hpp"
#include "auq/metrics.hpp"
#include "auq/simlab.hpp"
#include "auq/stemmer.hpp"

namespace py = pybind11;

namespace {

using Probs = std::vector<double>;
using Named = std::vector<std::pair<std::string, double>>;

// Python dicts keep insertion order, which becomes the class order.
auq::Categorical from_named(const py::dict& d) {
  std::vector<std::string> classes;
  std::vector<double> probs;
  for (const auto& [c, p] : d) {
    classes.push_back(py::cast<std::string>(c));
    probs.push_back(py::cast<double>(p));
  }
  return auq::Categorical(std::move(classes), std::move(probs));
}

Named to_named(const auq::Categorical& c) {
  Named out;
  for (std::size_t i = 0; i < c.size(); ++i) out.emplace_back(c.classes()[i], c[i]);
  return out;
}

std::vector<auq::metrics::EvalRecord> records(const Probs& true_eu, const Probs& scores) {
  if (true_eu.size() != scores.size()) throw auq::ValidationError("true_eu and scores differ in length");
  std::vector<auq::metrics::EvalRecord> r;
  for (std::size_t i = 0; i < true_eu.size(); ++i) r.push_back({std::to_string(i), true_eu[i], {{"score", scores[i]}}});
  return r;
}

}  // namespace

PYBIND11_MODULE(_auq, m) {
  m.doc() = "Aleatoric/epistemic uncertainty toolkit (native core)";

  static py::exception<auq::Error> base(m, "Error");
  py::register_exception<auq::IoError>(m, "IoError", base.ptr());
  py::register_exception<auq::ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<auq::DomainError>(m, "DomainError", base.ptr());
  py::register_exception<auq::SupportError>(m, "SupportError", base.ptr());
  py::register_exception<auq::DegenerateInputError>(m, "DegenerateInputError", base.ptr());
  py::register_exception<auq::UnavailableError>(m, "UnavailableError", base.ptr());

  m.def("entropy", [](const Probs& p) { return auq::entropy(auq::Categorical::from_probs(p)); }, py::arg("p"));
  m.def("kl", [](const Probs& a, const Probs& b) {
    return auq::kl(auq::Categorical::from_probs(a), auq::Categorical::from_probs(b));
  }, py::arg("p_star"), py::arg("p"));
  m.def("cross_entropy", [](const Probs& a, const Probs& b) {
    return auq::cross_entropy(auq::Categorical::from_probs(a), auq::Categorical::from_probs(b));
  }, py::arg("p_star"), py::arg("p"));
  m.def("decompose", [](const Probs& a, const Probs& b) {
    const auto d = auq::decompose(auq::Categorical::from_probs(a), auq::Categorical::from_probs(b));
    return py::dict(py::arg("total") = d.total, py::arg("aleatoric") = d.aleatoric, py::arg("epistemic") = d.epistemic);
  }, py::arg("p_star"), py::arg("p"), "Returns {total, aleatoric, epistemic} in nats.");
  m.def("js_divergence", [](const Probs& a, const Probs& b) {
    return auq::js_divergence(auq::Categorical::from_probs(a), auq::Categorical::from_probs(b));
  });
  m.def("normalize", [](const Probs& counts) {
    const auto c = auq::normalize(counts);
    return Probs(c.probs().begin(), c.probs().end());
  }, py::arg("counts"));

  m.def("h_max", &auq::bounds::h_max, py::arg("alpha"), py::arg("k"));
  m.def("binary_entropy", &auq::bounds::binary_entropy, py::arg("gamma"));
  m.def("alpha_delta", [](int k, double d) { return auq::bounds::alpha_delta({k, d}); }, py::arg("k"), py::arg("delta"));
  m.def("gamma_delta", &auq::bounds::gamma_delta, py::arg("delta"));
  m.def("eu_lower_bound", [](int k, double d) { return auq::bounds::eu_lower_bound_high_entropy({k, d}); },
        py::arg("k"), py::arg("delta"));
  m.def("thm2_probability_bound", [](double delta, double avg_loss, double p_low) {
    const auto b = auq::bounds::thm2_probability_bound(delta, avg_loss, p_low);
    return py::dict(py::arg("gamma_delta") = b.gamma_delta, py::arg("eu_cap") = b.eu_cap,
                    py::arg("prob_lower_bound") = b.prob_lower_bound);
  }, py::arg("delta"), py::arg("avg_loss"), py::arg("p_low_entropy"));

  m.def("digamma", &auq::dirichlet::digamma, py::arg("x"));
  m.def("expected_aleatoric", [](const Probs& counts, double gamma) {
    return auq::dirichlet::expected_aleatoric(auq::dirichlet::posterior(counts, gamma));
  }, py::arg("counts"), py::arg("gamma") = 1.0);
  m.def("expected_epistemic", [](const Probs& counts, const Probs& p, double gamma) {
    return auq::dirichlet::expected_epistemic(auq::dirichlet::posterior(counts, gamma), p);
  }, py::arg("counts"), py::arg("p"), py::arg("gamma") = 1.0);

  m.def("align", [](const py::dict& p_star, const py::dict& p, double eps) {
    const auto a = auq::estimators::align(from_named(p_star), from_named(p), {}, eps);
    return std::make_pair(to_named(a.p_star), to_named(a.p_model));
  }, py::arg("p_star"), py::arg("p"), py::arg("epsilon") = auq::estimators::kDefaultEpsilon,
     "Aligns two {class: prob} mappings; returns lists of (class, prob) pairs on the joint support.");
  m.def("semantic_entropy", [](const Probs& p) {
    return auq::estimators::semantic_entropy(auq::Categorical::from_probs(p));
  });
  m.def("mutual_information", [](const std::vector<Probs>& members) {
    auq::estimators::EnsemblePrediction e;
    for (const auto& p : members) e.members.push_back(auq::Categorical::from_probs(p));
    return auq::estimators::mutual_information(e);
  }, py::arg("members"));

  m.def("concordance", [](const Probs& eu, const Probs& s) { return auq::metrics::concordance(records(eu, s), "score"); },
        py::arg("true_eu"), py::arg("scores"));
  m.def("aucroc", [](const Probs& eu, const Probs& s, double delta) {
    return auq::metrics::aucroc(records(eu, s), "score", delta);
  }, py::arg("true_eu"), py::arg("scores"), py::arg("delta"));

  m.def("stem", &auq::text::stem, py::arg("term"));

  m.def("_simulate_json", [](const std::string& config_json) {
    const auto config = auq::io::sim_config_from_json(auq::io::json::parse(config_json));
    py::gil_scoped_release release;
    return auq::io::to_json(auq::simlab::run_experiment(config).report).dump();
  });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<const char*> argv{"auq"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    int code = 0;
    {
      py::gil_scoped_release release;
      code = auq::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
