#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "pilgrim/cladogram.hpp"
#include "pilgrim/density.hpp"
#include "pilgrim/exponent.hpp"
#include "pilgrim/monopoly.hpp"
#include "pilgrim/partitions.hpp"
#include "pilgrim/stats.hpp"
#include "pilgrim/voyage.hpp"

namespace py = pybind11;
using namespace pilgrim;

namespace {

py::dict ledger_summary(const Simulation& s) {
  py::dict d;
  d["times"] = s.times.values();
  d["hotels"] = s.ledger.hotel_count();
  d["funds"] = s.ledger.funds_total();
  d["tolls"] = s.ledger.tolls_paid();
  d["taxes_and_forfeits"] = s.ledger.taxes_and_forfeits();
  std::vector<long> occ;
  std::vector<double> pos;
  for (const auto& h : s.ledger.hotels()) {
    occ.push_back(h.occupancy);
    pos.push_back(h.position);
  }
  d["positions"] = pos;
  d["occupancy"] = occ;
  return d;
}

using IntMatrix = std::vector<std::vector<int>>;

IntMatrix to_int(const IncidenceMatrix& z) {
  IntMatrix out;
  for (const auto& row : z) out.emplace_back(row.begin(), row.end());
  return out;
}

IncidenceMatrix from_int(const IntMatrix& z) {
  IncidenceMatrix out;
  for (const auto& row : z) {
    auto& r = out.emplace_back();
    for (int v : row) r.push_back(v != 0 ? 1 : 0);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_pilgrim, m) {
  m.doc() = "Pilgrim process simulation, densities and exact partition laws";

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<double, double, double>(), py::arg("rho"), py::arg("beta") = 0.0, py::arg("nu") = 1.0)
      .def_property_readonly("rho", &ModelParams::rho)
      .def_property_readonly("beta", &ModelParams::beta)
      .def_property_readonly("nu", &ModelParams::nu)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(rho=" + std::to_string(p.rho()) + ", beta=" + std::to_string(p.beta()) +
               ", nu=" + std::to_string(p.nu()) + ")";
      });

  m.def(
      "simulate_from_funds",
      [](const std::vector<double>& funds, const ModelParams& p) { return ledger_summary(simulate_from_funds(funds, p)); },
      py::arg("funds"), py::arg("params"));
  m.def(
      "simulate", [](long n, const ModelParams& p, std::uint64_t seed) { return ledger_summary(simulate(n, p, seed)); },
      py::arg("n"), py::arg("params"), py::arg("seed"));

  m.def(
      "zeta",
      [](const ModelParams& p, double t) { return zeta_continuous(CharacteristicExponent::from_params(p), t); },
      py::arg("params"), py::arg("t"));
  m.def(
      "forward_difference",
      [](const ModelParams& p, long r, long d) {
        return forward_difference(CharacteristicExponent::from_params(p), r, d).value();
      },
      py::arg("params"), py::arg("r"), py::arg("d"));
  m.def(
      "splitting_prob", [](const ModelParams& p, long r, long d) { return splitting_prob(p, r, d); }, py::arg("params"),
      py::arg("r"), py::arg("d"));

  m.def(
      "log_density",
      [](const std::vector<double>& t, const ModelParams& p) {
        return log_density_general(EventSequence(t), CharacteristicExponent::from_params(p));
      },
      py::arg("times"), py::arg("params"));
  m.def(
      "predictive_survival",
      [](const std::vector<double>& history, const ModelParams& p, const std::vector<double>& grid) {
        const auto c = predictive_survival(EventSequence(history), p);
        std::vector<double> out;
        for (double x : grid) out.push_back(c.survival(x));
        return out;
      },
      py::arg("history"), py::arg("params"), py::arg("grid"));
  m.def(
      "kaplan_meier",
      [](const std::vector<double>& history, const std::vector<double>& grid) {
        const auto km = kaplan_meier(EventSequence(history));
        std::vector<double> out;
        for (double x : grid) out.push_back(km(x));
        return out;
      },
      py::arg("history"), py::arg("grid"));

  m.def("expected_blocks_recursion", &expected_blocks_recursion, py::arg("n"), py::arg("params"));
  m.def("expected_blocks_exact", &expected_blocks_exact, py::arg("n"), py::arg("params"));

  m.def(
      "induced_partition_prob",
      [](const std::string& text, const ModelParams& p) { return induced_partition_prob(Partition::parse(text), p); },
      py::arg("partition"), py::arg("params"));
  m.def(
      "esf_prob", [](const std::string& text, double theta) { return std::exp(esf_logprob(Partition::parse(text), theta)); },
      py::arg("partition"), py::arg("theta"));
  m.def(
      "ordered_partition_prob",
      [](const std::vector<std::vector<int>>& blocks, const ModelParams& p) {
        return std::exp(ordered_partition_logprob(OrderedPartition(blocks), p));
      },
      py::arg("blocks"), py::arg("params"));
  m.def(
      "set_partitions",
      [](int n) {
        std::vector<std::string> out;
        for (const auto& b : all_set_partitions(n)) out.push_back(b.to_string());
        return out;
      },
      py::arg("n"));
  m.def("crp_equivalence_distance", &crp_equivalence_distance, py::arg("n"), py::arg("rho"));

  m.def(
      "simulate_voyage",
      [](int n, double horizon, const ModelParams& p, std::uint64_t seed) {
        return to_int(simulate_voyage(n, horizon, p, seed).allocation.incidence());
      },
      py::arg("n"), py::arg("horizon"), py::arg("params"), py::arg("seed"));
  m.def(
      "ibp_sample",
      [](int n, double gamma, double theta, double alpha, std::uint64_t seed) {
        return to_int(ibp_sample(n, gamma, theta, alpha, seed).incidence());
      },
      py::arg("n"), py::arg("gamma"), py::arg("theta"), py::arg("alpha") = 0.0, py::arg("seed") = 0);
  m.def(
      "voyage_pattern_prob",
      [](const IntMatrix& z, const ModelParams& p) { return std::exp(voyage_pattern_log_prob(from_int(z), p)); },
      py::arg("z"), py::arg("params"));
  m.def(
      "ibp_pattern_prob",
      [](const IntMatrix& z, double gamma, double theta, double alpha) {
        return std::exp(ibp_pattern_log_prob(from_int(z), gamma, theta, alpha));
      },
      py::arg("z"), py::arg("gamma"), py::arg("theta"), py::arg("alpha") = 0.0);

  m.def(
      "sample_cladogram",
      [](int n, double beta, double lambda2, std::uint64_t seed) {
        return to_newick(sample_cladogram(n, SplitModel::beta_splitting(beta), lambda2, seed));
      },
      py::arg("n"), py::arg("beta"), py::arg("lambda2") = 1.0, py::arg("seed") = 0);
  m.def(
      "canonical_topology", [](const std::string& newick) { return parse_newick(newick).canonical_topology(); },
      py::arg("newick"));
  m.def("beta_split_prob", &beta_split_prob, py::arg("n"), py::arg("i"), py::arg("beta"));
  m.def("branch_prob_right", &branch_prob_right, py::arg("n"), py::arg("i"), py::arg("beta"));
  m.def("branch_prob_consecutive", &branch_prob_consecutive, py::arg("n"), py::arg("i"), py::arg("beta"));
}
