// Python bindings for the core operations: channels and CJ matrices, PDM
// construction and probability rules, two-time states, process matrices, the
// mappings between the formalisms, and the switch negativity scan.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stq/mappings.hpp"
#include "stq/qswitch.hpp"
#include "stq/verify.hpp"

namespace py = pybind11;
using namespace stq;

namespace {

SlotSpace space_from_pairs(const std::vector<std::pair<std::string, Index>>& slots) {
  std::vector<Slot> s;
  s.reserve(slots.size());
  for (const auto& [label, dim] : slots) s.push_back({label, dim});
  return SlotSpace(std::move(s));
}

std::vector<std::pair<std::string, Index>> space_to_pairs(const SlotSpace& space) {
  std::vector<std::pair<std::string, Index>> out;
  for (const auto& s : space.slots) out.emplace_back(s.label, s.dim);
  return out;
}

py::dict channel_report_dict(const ChannelReport& rep) {
  py::dict d;
  d["ok"] = rep.ok;
  d["tp_residual"] = rep.tp_residual;
  d["tni_excess"] = rep.tni_excess;
  return d;
}

}  // namespace

PYBIND11_MODULE(_stq, m) {
  m.doc() = "spatiotemporal quantum states: PDMs, two-time states, process matrices";

  py::class_<Channel>(m, "Channel")
      .def(py::init<Index, Index, std::vector<CMat>>(), py::arg("dim_in"),
           py::arg("dim_out"), py::arg("kraus"))
      .def_readonly("dim_in", &Channel::dim_in)
      .def_readonly("dim_out", &Channel::dim_out)
      .def_readonly("kraus", &Channel::kraus)
      .def("apply", &Channel::apply, py::arg("rho"))
      .def("kraus_sum", &Channel::kraus_sum);

  py::class_<Instrument>(m, "Instrument")
      .def(py::init([](std::vector<Channel> outcomes) {
             return Instrument{std::move(outcomes)};
           }),
           py::arg("outcomes"))
      .def_readonly("outcomes", &Instrument::outcomes)
      .def("summed", &Instrument::summed);

  py::class_<CjMatrix>(m, "CjMatrix")
      .def_readonly("matrix", &CjMatrix::matrix)
      .def_readonly("dim_in", &CjMatrix::dim_in)
      .def_readonly("dim_out", &CjMatrix::dim_out);

  py::class_<Pdm>(m, "Pdm")
      .def(py::init([](const CMat& matrix,
                       const std::vector<std::pair<std::string, Index>>& slots,
                       bool normalized) {
             return Pdm{matrix, space_from_pairs(slots), normalized};
           }),
           py::arg("matrix"), py::arg("slots"), py::arg("normalized") = true)
      .def_readonly("matrix", &Pdm::matrix)
      .def_readonly("normalized", &Pdm::normalized)
      .def_property_readonly("slots",
                             [](const Pdm& r) { return space_to_pairs(r.space); })
      .def("trace", &Pdm::trace)
      .def(
          "marginal",
          [](const Pdm& r, const std::vector<std::string>& keep) {
            return marginal(r, keep);
          },
          py::arg("keep"))
      .def("negativity", [](const Pdm& r) { return negativity(r); });

  py::class_<PureTwoTimeState>(m, "PureTwoTimeState")
      .def_static("product", &PureTwoTimeState::product, py::arg("post"), py::arg("pre"))
      .def_static("single", &PureTwoTimeState::single, py::arg("coeff"))
      .def_static("bipartite", &PureTwoTimeState::bipartite, py::arg("coeff"),
                  py::arg("da1") = 2, py::arg("da2") = 2, py::arg("db1") = 2,
                  py::arg("db2") = 2)
      .def_readonly("coeffs", &PureTwoTimeState::coeffs)
      .def_property_readonly("n_parties", &PureTwoTimeState::n_parties)
      .def("norm_squared", &PureTwoTimeState::norm_squared);

  py::class_<TwoTimeEnsemble>(m, "TwoTimeEnsemble")
      .def(py::init([](const std::vector<std::pair<double, PureTwoTimeState>>& members) {
             TwoTimeEnsemble e;
             for (const auto& [w, s] : members) e.members.push_back({w, s});
             return e;
           }),
           py::arg("members"))
      .def_property_readonly("members", [](const TwoTimeEnsemble& e) {
        std::vector<std::pair<double, PureTwoTimeState>> out;
        for (const auto& mbr : e.members) out.emplace_back(mbr.weight, mbr.state);
        return out;
      });

  py::class_<ProcessMatrix>(m, "ProcessMatrix")
      .def(py::init(&ProcessMatrix::qubit), py::arg("matrix"))
      .def(py::init<CMat, Index, Index, Index, Index>(), py::arg("matrix"),
           py::arg("dim_a1"), py::arg("dim_a2"), py::arg("dim_b1"), py::arg("dim_b2"))
      .def_readonly("matrix", &ProcessMatrix::matrix);

  py::class_<PdmRealization>(m, "PdmRealization")
      .def_readonly("pdm", &PdmRealization::pdm)
      .def_readonly("post_label", &PdmRealization::post_label)
      .def_readonly("ancilla_traced", &PdmRealization::ancilla_traced)
      .def("trace", &PdmRealization::trace);

  // tensor helpers beyond what numpy provides directly
  m.def(
      "partial_trace",
      [](const CMat& mat, const std::vector<std::pair<std::string, Index>>& slots,
         const std::vector<std::string>& keep) {
        return partial_trace(mat, space_from_pairs(slots), keep);
      },
      py::arg("matrix"), py::arg("slots"), py::arg("keep"));
  m.def("trace_norm", &trace_norm, py::arg("matrix"));

  // channels
  m.def("cj_matrix", &cj_matrix, py::arg("channel"));
  m.def("apply_cj", &apply_cj, py::arg("cj"), py::arg("rho"));
  m.def("identity_channel", &identity_channel, py::arg("dim"));
  m.def("basis_projector_channel", &basis_projector_channel, py::arg("i"), py::arg("dim"));
  m.def("random_cptp", &random_cptp, py::arg("dim_in"), py::arg("dim_out"),
        py::arg("n_kraus"), py::arg("seed"));
  m.def("random_instrument", &random_instrument, py::arg("dim"), py::arg("n_outcomes"),
        py::arg("seed"), py::arg("kraus_per_outcome") = 1);
  m.def("validate_cptp", [](const Channel& ch) {
    return channel_report_dict(validate(ch, ValidateMode::Cptp));
  });
  m.def("validate_instrument",
        [](const Instrument& inst) { return channel_report_dict(validate(inst)); });

  // pdm
  m.def(
      "build_closed_form",
      [](const CMat& rho1, const std::vector<CjMatrix>& chain,
         const std::vector<std::string>& labels) {
        return build_closed_form(rho1, chain, labels);
      },
      py::arg("rho1"), py::arg("chain"), py::arg("labels") = std::vector<std::string>{});
  m.def(
      "build_tomographic",
      [](const CMat& rho1, const std::vector<Channel>& chain,
         const std::vector<std::string>& labels) {
        return build_tomographic(rho1, chain, labels);
      },
      py::arg("rho1"), py::arg("chain"), py::arg("labels") = std::vector<std::string>{});
  m.def("prob_outcome", &prob_outcome, py::arg("r_a"));
  m.def("prob_projector", &prob_projector, py::arg("r_a"), py::arg("slot"),
        py::arg("proj"));
  m.def(
      "prob_coarse",
      [](const Pdm& r_a, const std::vector<int>& s1, const std::vector<int>& s2) {
        return prob_coarse(r_a, PauliString(s1), PauliString(s2));
      },
      py::arg("r_a"), py::arg("s1"), py::arg("s2"));
  m.def("prob_multiparty", &prob_multiparty, py::arg("rho1"), py::arg("ma1"),
        py::arg("mb1"), py::arg("ma2"), py::arg("mb2"));

  // two-time states
  m.def(
      "bullet",
      [](const PureTwoTimeState& s, const std::vector<CMat>& ops) {
        return bullet(s, ops);
      },
      py::arg("state"), py::arg("op_per_party"));
  m.def("abl_prob", &abl_prob, py::arg("pre"), py::arg("post"), py::arg("instrument"),
        py::arg("a"));
  m.def("pure_prob", &pure_prob, py::arg("state"), py::arg("instrument"), py::arg("a"));
  m.def("ensemble_prob",
        py::overload_cast<const TwoTimeEnsemble&, const Instrument&, int>(&ensemble_prob),
        py::arg("ensemble"), py::arg("instrument"), py::arg("a"));
  m.def("ensemble_prob_bipartite",
        py::overload_cast<const TwoTimeEnsemble&, const Instrument&, const Instrument&,
                          int, int>(&ensemble_prob),
        py::arg("ensemble"), py::arg("inst_a"), py::arg("inst_b"), py::arg("a"),
        py::arg("b"));
  m.def("gram_matrix", &gram_matrix, py::arg("ensemble"));

  // process matrices
  m.def("born_rule", &born_rule, py::arg("w"), py::arg("ma"), py::arg("mb"));
  m.def("born_table", &born_table, py::arg("w"), py::arg("inst_a"), py::arg("inst_b"));
  m.def(
      "validate_process",
      [](const ProcessMatrix& w, int n_samples, std::uint64_t seed) {
        ProcessReport rep = validate(w, n_samples, seed);
        py::dict d;
        d["min_eigenvalue"] = rep.min_eigenvalue;
        d["max_norm_deviation"] = rep.max_norm_deviation;
        d["psd"] = rep.psd_ok;
        d["normalization"] = rep.normalization_ok;
        d["valid"] = rep.valid;
        return d;
      },
      py::arg("w"), py::arg("n_samples") = 64, py::arg("seed") = 1);
  m.def("causal_mixture", &causal_mixture, py::arg("w_bna"), py::arg("w_anb"),
        py::arg("q"));
  m.def("sequential_process", &sequential_process, py::arg("rho"), py::arg("wire"),
        py::arg("a_first"));
  m.def("random_causal_process", &random_causal_process, py::arg("seed"),
        py::arg("dim") = 2);

  // mappings between the formalisms
  m.def("simple_to_pdm", &simple_to_pdm, py::arg("j"), py::arg("i"), py::arg("instrument"),
        py::arg("a"), py::arg("dim") = 2);
  m.def("simple_conditional", &simple_conditional, py::arg("j"), py::arg("i"),
        py::arg("instrument"), py::arg("dim") = 2);
  m.def("pure_to_pdm", &pure_to_pdm, py::arg("state"), py::arg("instrument"), py::arg("a"));
  m.def("pure_conditional", &pure_conditional, py::arg("state"), py::arg("instrument"));
  m.def("ensemble_to_pdm", &ensemble_to_pdm, py::arg("ensemble"), py::arg("instrument"),
        py::arg("a"));
  m.def("ensemble_conditional", &ensemble_conditional, py::arg("ensemble"),
        py::arg("instrument"));
  m.def("solve_gram", &solve_gram, py::arg("gram"), py::arg("da1") = 2, py::arg("da2") = 2,
        py::arg("db1") = 2, py::arg("db2") = 2);
  m.def("bridge_gram", &bridge_gram, py::arg("w"));
  m.def("process_to_twotime", &process_to_twotime, py::arg("w"));
  m.def("process_to_pdm", &process_to_pdm, py::arg("w"), py::arg("inst_a"),
        py::arg("inst_b"), py::arg("a"), py::arg("b"));
  m.def("process_to_pdm_table", &process_to_pdm_table, py::arg("w"), py::arg("inst_a"),
        py::arg("inst_b"));

  // quantum switch
  m.def("constant_channel", &constant_channel);
  m.def("switch_channel", &switch_channel, py::arg("n1"), py::arg("n2"));
  m.def(
      "switch_pdm", [](double p_a, double p_c) { return switch_pdm({p_a, p_c}); },
      py::arg("p_a"), py::arg("p_c"));
  m.def(
      "negativity_scan",
      [](int steps, int n_threads) {
        auto rows = negativity_scan(steps, n_threads);
        Eigen::MatrixXd out(rows.size(), 6);
        for (std::size_t k = 0; k < rows.size(); ++k)
          out.row(k) << rows[k].p_a, rows[k].p_c, rows[k].f_a1c2a2, rows[k].f_c1a1a2,
              rows[k].f_a1c2, rows[k].f_a1a2;
        return out;
      },
      py::arg("steps") = 11, py::arg("n_threads") = 1,
      "columns: p_a, p_c, f_a1c2a2, f_c1a1a2, f_a1c2, f_a1a2");

  // verification suites
  m.def(
      "verify",
      [](const std::string& suite, int trials, std::uint64_t seed) {
        py::list out;
        for (const auto& r : verify_suites(suite, trials, seed)) {
          py::dict d;
          d["suite"] = r.suite;
          d["trials"] = r.trials;
          d["seed"] = r.seed;
          py::dict devs;
          for (const auto& [name, dev] : r.deviations) devs[name.c_str()] = dev;
          d["deviations"] = devs;
          d["max_deviation"] = r.max_deviation();
          out.append(d);
        }
        return out;
      },
      py::arg("suite") = "all", py::arg("trials") = 50, py::arg("seed") = 42);
}
