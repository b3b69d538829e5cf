#include "stq/mappings.hpp"

#include <cmath>
#include <stdexcept>

namespace stq {

namespace {

constexpr double kPostSelectionFloor = 1e-14;

// Preparation vector of the canonical realization: the input legs feed the
// system, the output legs are mirrored on the ancilla.
// psi[(s, c)] = coeff[legs], s packing In digits and c packing Out digits in
// party order.
CVec preparation_vector(const PureTwoTimeState& state, Index& sys_dim, Index& anc_dim) {
  const int parties = state.n_parties();
  std::vector<std::size_t> in_leg(parties), out_leg(parties);
  for (std::size_t l = 0; l < state.legs.size(); ++l) {
    const auto& leg = state.legs[l];
    (leg.role == LegRole::In ? in_leg : out_leg)[leg.party] = l;
  }
  sys_dim = 1;
  anc_dim = 1;
  for (int p = 0; p < parties; ++p) {
    auto [din, dout] = state.party_dims(p);
    if (din != dout)
      throw std::invalid_argument("realization requires square legs per party");
    sys_dim *= din;
    anc_dim *= dout;
  }
  std::vector<Index> strides(state.legs.size(), 1);
  for (int l = static_cast<int>(state.legs.size()) - 2; l >= 0; --l)
    strides[l] = strides[l + 1] * state.legs[l + 1].dim;

  CVec psi = CVec::Zero(sys_dim * anc_dim);
  for (Index idx = 0; idx < state.coeffs.size(); ++idx) {
    Index s = 0, c = 0;
    for (int p = 0; p < parties; ++p) {
      s = s * state.legs[in_leg[p]].dim + (idx / strides[in_leg[p]]) % state.legs[in_leg[p]].dim;
      c = c * state.legs[out_leg[p]].dim + (idx / strides[out_leg[p]]) % state.legs[out_leg[p]].dim;
    }
    psi[s * anc_dim + c] = state.coeffs[idx];
  }
  return psi;
}

// Maximally entangled post-selection on system (x) ancilla.
CVec post_selection_vector(Index sys_dim) {
  CVec phi = CVec::Zero(sys_dim * sys_dim);
  double c = 1.0 / std::sqrt(static_cast<double>(sys_dim));
  for (Index u = 0; u < sys_dim; ++u) phi[u * sys_dim + u] = c;
  return phi;
}

// Outcome map on the system, identity on the ancilla.
Channel dilated_outcome(const std::vector<const Channel*>& per_party, Index anc_dim) {
  if (per_party.empty()) throw std::invalid_argument("need at least one outcome map");
  Channel sys = *per_party.front();
  for (std::size_t p = 1; p < per_party.size(); ++p)
    sys = tensor_channel(sys, *per_party[p]);
  if (sys.dim_in != sys.dim_out)
    throw std::invalid_argument("realization requires square outcome maps");
  return tensor_channel(sys, identity_channel(anc_dim));
}

// Tr of the post-selected three-time PDM:
//   R12 = ah(psi psi^dag (x) I, M),  R3 = ah(R12 (x) I, P_phi),
//   Tr R3 = <psi (x) phi | M | psi (x) phi>
// (exact consequence of the rank-one preparation and post-selection).
double branch_trace(const CVec& psi, const CMat& cj, const CVec& phi) {
  CVec v = kron(CMat(psi), CMat(phi)).col(0);
  return (v.adjoint() * cj * v).value().real();
}

struct RealizationLabels {
  std::vector<std::string> party_names;  // e.g. {"A"} or {"A", "B"}
  std::vector<Index> party_dims;
};

RealizationLabels labels_for(const PureTwoTimeState& state) {
  static const char* names[] = {"A", "B", "P2", "P3"};
  RealizationLabels out;
  for (int p = 0; p < state.n_parties(); ++p) {
    out.party_names.push_back(names[p]);
    out.party_dims.push_back(state.party_dims(p).first);
  }
  return out;
}

// Materialize the ancilla-traced three-time PDM of one realization branch.
// The two-time object R12 is held in low-rank form so the three-slot operator
// is never stored densely.
CMat reduced_branch_pdm(const CVec& psi, const CMat& cj, const CVec& phi,
                        const RealizationLabels& rl, Index sys_dim, Index anc_dim,
                        SlotSpace& fine_space, std::vector<std::string>& keep) {
  const Index slot_dim = sys_dim * anc_dim;

  // R12 = 1/2 (M rho' + rho' M) with rho' = psi psi^dag (x) I:
  // columns v_y = psi (x) e_y, m_y = M v_y.
  CMat v = kron(CMat(psi), identity(slot_dim));  // slot_dim^2 x slot_dim
  CMat m = cj * v;
  CMat r12 = 0.5 * (m * v.adjoint() + v * m.adjoint());

  // fine slots: per party system factor then ancilla, three times
  std::vector<Slot> slots;
  keep.clear();
  for (int t = 1; t <= 3; ++t) {
    for (std::size_t p = 0; p < rl.party_names.size(); ++p) {
      std::string lab = rl.party_names[p] + std::to_string(t);
      slots.push_back({lab, rl.party_dims[p]});
      keep.push_back(lab);
    }
    slots.push_back({"C" + std::to_string(t), anc_dim});
  }
  fine_space = SlotSpace(std::move(slots));

  // R3 = 1/2 sum_x (d_x c_x^dag + h.c.), c_x = e_x (x) phi (x) phi,
  // d_x = (R12 (e_x (x) phi)) (x) phi; trace the ancilla factors per term.
  const Index keep_dim = fine_space.subspace(keep).total_dim();
  CMat reduced = CMat::Zero(keep_dim, keep_dim);
  for (Index x = 0; x < slot_dim; ++x) {
    CVec ex = CVec::Zero(slot_dim);
    ex[x] = 1.0;
    CVec w = kron(CMat(ex), CMat(phi)).col(0);
    CVec rw = r12 * w;
    CVec d = kron(CMat(rw), CMat(phi)).col(0);
    CVec c = kron(CMat(w), CMat(phi)).col(0);
    CMat t = partial_trace_outer(d, c, fine_space, keep);
    reduced += 0.5 * (t + t.adjoint());
  }
  return reduced;
}

std::vector<double> conditional_from_traces(std::vector<double> traces) {
  double denom = 0.0;
  for (double t : traces) denom += t;
  if (denom <= kPostSelectionFloor)
    throw std::domain_error("impossible post-selection: zero total branch weight");
  for (double& t : traces) t /= denom;
  return traces;
}

void check_outcome_index(const Instrument& inst, int a) {
  if (a < 0 || a >= static_cast<int>(inst.outcomes.size()))
    throw std::invalid_argument("outcome index out of range");
}

}  // namespace

PdmRealization simple_to_pdm(Index j, Index i, const Instrument& inst, int a, Index d) {
  check_outcome_index(inst, a);
  if (j < 0 || j >= d || i < 0 || i >= d)
    throw std::invalid_argument("basis index out of range");
  CMat rho = CMat::Zero(d, d);
  rho(j, j) = 1.0;
  std::vector<CjMatrix> chain{cj_matrix(inst.outcomes[a]),
                              cj_matrix(basis_projector_channel(i, d))};
  Pdm r = build_closed_form(rho, chain);
  return PdmRealization{std::move(r), "i=" + std::to_string(i), false};
}

std::vector<double> simple_conditional(Index j, Index i, const Instrument& inst, Index d) {
  std::vector<double> traces;
  traces.reserve(inst.outcomes.size());
  for (int a = 0; a < static_cast<int>(inst.outcomes.size()); ++a)
    traces.push_back(simple_to_pdm(j, i, inst, a, d).trace());
  return conditional_from_traces(std::move(traces));
}

double realization_trace(const PureTwoTimeState& state,
                         const std::vector<const Channel*>& outcome_per_party) {
  Index sys_dim = 0, anc_dim = 0;
  CVec psi = preparation_vector(state, sys_dim, anc_dim);
  CVec phi = post_selection_vector(sys_dim);
  CjMatrix cj = cj_matrix(dilated_outcome(outcome_per_party, anc_dim));
  return branch_trace(psi, cj.matrix, phi);
}

PdmRealization pure_to_pdm(const PureTwoTimeState& state, const Instrument& inst, int a) {
  check_outcome_index(inst, a);
  if (state.n_parties() != 1)
    throw std::invalid_argument("pure_to_pdm expects a single-party state");
  double n2 = state.norm_squared();
  if (n2 <= 0) throw std::invalid_argument("zero coefficient tensor");
  PureTwoTimeState normalized = state;
  normalized.coeffs /= std::sqrt(n2);

  Index sys_dim = 0, anc_dim = 0;
  CVec psi = preparation_vector(normalized, sys_dim, anc_dim);
  CVec phi = post_selection_vector(sys_dim);
  CjMatrix cj = cj_matrix(dilated_outcome({&inst.outcomes[a]}, anc_dim));

  RealizationLabels rl = labels_for(normalized);
  SlotSpace fine;
  std::vector<std::string> keep;
  CMat reduced = reduced_branch_pdm(psi, cj.matrix, phi, rl, sys_dim, anc_dim, fine, keep);
  Pdm pdm{std::move(reduced), fine.subspace(keep), false};
  pdm.normalized = std::abs(pdm.trace() - 1.0) <= 1e-9;
  return PdmRealization{std::move(pdm), "phi", true};
}

std::vector<double> pure_conditional(const PureTwoTimeState& state, const Instrument& inst) {
  if (state.n_parties() != 1)
    throw std::invalid_argument("pure_conditional expects a single-party state");
  std::vector<double> traces;
  traces.reserve(inst.outcomes.size());
  for (const auto& outcome : inst.outcomes)
    traces.push_back(realization_trace(state, {&outcome}));
  return conditional_from_traces(std::move(traces));
}

PdmRealization ensemble_to_pdm(const TwoTimeEnsemble& ens, const Instrument& inst, int a) {
  check_outcome_index(inst, a);
  if (ens.members.empty()) throw std::invalid_argument("ensemble has no members");
  PdmRealization total;
  bool first = true;
  for (const auto& member : ens.members) {
    if (member.state.n_parties() != 1)
      throw std::invalid_argument("ensemble_to_pdm expects single-party members");
    Index sys_dim = 0, anc_dim = 0;
    CVec psi = preparation_vector(member.state, sys_dim, anc_dim);
    CVec phi = post_selection_vector(sys_dim);
    CjMatrix cj = cj_matrix(dilated_outcome({&inst.outcomes[a]}, anc_dim));
    RealizationLabels rl = labels_for(member.state);
    SlotSpace fine;
    std::vector<std::string> keep;
    CMat reduced = reduced_branch_pdm(psi, cj.matrix, phi, rl, sys_dim, anc_dim, fine, keep);
    if (first) {
      total.pdm = Pdm{member.weight * reduced, fine.subspace(keep), false};
      first = false;
    } else {
      if (total.pdm.matrix.rows() != reduced.rows())
        throw std::invalid_argument("ensemble members have mismatched dimensions");
      total.pdm.matrix += member.weight * reduced;
    }
  }
  total.post_label = "phi";
  total.ancilla_traced = true;
  total.pdm.normalized = std::abs(total.pdm.trace() - 1.0) <= 1e-9;
  return total;
}

std::vector<double> ensemble_conditional(const TwoTimeEnsemble& ens, const Instrument& inst) {
  if (ens.members.empty()) throw std::invalid_argument("ensemble has no members");
  std::vector<double> traces(inst.outcomes.size(), 0.0);
  for (const auto& member : ens.members)
    for (std::size_t a = 0; a < inst.outcomes.size(); ++a)
      traces[a] += member.weight * realization_trace(member.state, {&inst.outcomes[a]});
  return conditional_from_traces(std::move(traces));
}

TwoTimeEnsemble solve_gram(const CMat& gram, Index da1, Index da2, Index db1, Index db2) {
  const Index n = da1 * da2 * db1 * db2;
  if (gram.rows() != n || gram.cols() != n)
    throw std::invalid_argument("solve_gram: matrix does not match leg dims");
  if (!is_hermitian(gram, 1e-10))
    throw std::domain_error("solve_gram: gram tensor is not Hermitian");
  EighResult es = eigh(gram);
  double total = es.eigenvalues.sum();
  if (es.eigenvalues.minCoeff() < -1e-10)
    throw std::domain_error("solve_gram: gram tensor is not positive semidefinite");
  if (total <= 0) throw std::domain_error("solve_gram: zero gram tensor");
  TwoTimeEnsemble ens;
  double scale = std::sqrt(total);
  for (Index r = 0; r < n; ++r) {
    if (es.eigenvalues[r] < 1e-12) continue;
    CVec coeff = scale * es.eigenvectors.col(r);
    ens.members.push_back(
        {es.eigenvalues[r] / total,
         PureTwoTimeState::bipartite(coeff, da1, da2, db1, db2)});
  }
  if (ens.members.empty()) throw std::domain_error("solve_gram: zero gram tensor");
  return ens;
}

CMat bridge_gram(const ProcessMatrix& w) {
  return partial_transpose(w.matrix, w.space(), {"A2", "B2"});
}

TwoTimeEnsemble process_to_twotime(const ProcessMatrix& w) {
  return solve_gram(bridge_gram(w), w.dim_a1, w.dim_a2, w.dim_b1, w.dim_b2);
}

PdmRealization process_to_pdm(const ProcessMatrix& w, const Instrument& inst_a,
                              const Instrument& inst_b, int a, int b) {
  check_outcome_index(inst_a, a);
  check_outcome_index(inst_b, b);
  TwoTimeEnsemble ens = process_to_twotime(w);
  PdmRealization total;
  bool first = true;
  for (const auto& member : ens.members) {
    Index sys_dim = 0, anc_dim = 0;
    CVec psi = preparation_vector(member.state, sys_dim, anc_dim);
    CVec phi = post_selection_vector(sys_dim);
    CjMatrix cj = cj_matrix(
        dilated_outcome({&inst_a.outcomes[a], &inst_b.outcomes[b]}, anc_dim));
    RealizationLabels rl = labels_for(member.state);
    SlotSpace fine;
    std::vector<std::string> keep;
    CMat reduced = reduced_branch_pdm(psi, cj.matrix, phi, rl, sys_dim, anc_dim, fine, keep);
    if (first) {
      total.pdm = Pdm{member.weight * reduced, fine.subspace(keep), false};
      first = false;
    } else {
      total.pdm.matrix += member.weight * reduced;
    }
  }
  total.post_label = "phi";
  total.ancilla_traced = true;
  total.pdm.normalized = std::abs(total.pdm.trace() - 1.0) <= 1e-9;
  return total;
}

Eigen::MatrixXd process_to_pdm_table(const ProcessMatrix& w, const Instrument& inst_a,
                                     const Instrument& inst_b) {
  TwoTimeEnsemble ens = process_to_twotime(w);
  const std::size_t na = inst_a.outcomes.size(), nb = inst_b.outcomes.size();
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(na, nb);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b)
      for (const auto& member : ens.members)
        table(a, b) += member.weight *
                       realization_trace(member.state, {&inst_a.outcomes[a],
                                                        &inst_b.outcomes[b]});
  double denom = table.sum();
  if (denom <= kPostSelectionFloor)
    throw std::domain_error("impossible post-selection: zero total branch weight");
  return table / denom;
}

}  // namespace stq
