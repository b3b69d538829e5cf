#include "stq/twotime.hpp"

#include <map>
#include <stdexcept>

namespace stq {

namespace {
constexpr double kPostSelectionFloor = 1e-14;
}

PureTwoTimeState::PureTwoTimeState(std::vector<TwoTimeLeg> ls, CVec cs)
    : legs(std::move(ls)), coeffs(std::move(cs)) {
  Index total = 1;
  std::map<int, std::pair<int, int>> counts;  // party -> (n_in, n_out)
  for (const auto& leg : legs) {
    if (leg.dim <= 0) throw std::invalid_argument("leg dimension must be positive");
    total *= leg.dim;
    auto& c = counts[leg.party];
    (leg.role == LegRole::In ? c.first : c.second) += 1;
  }
  for (const auto& [party, c] : counts)
    if (c.first != 1 || c.second != 1)
      throw std::invalid_argument("each party needs exactly one In and one Out leg");
  if (counts.empty()) throw std::invalid_argument("state needs at least one party");
  for (int p = 0; p < static_cast<int>(counts.size()); ++p)
    if (!counts.count(p)) throw std::invalid_argument("party indices must be 0..P-1");
  if (coeffs.size() != total)
    throw std::invalid_argument("coefficient tensor does not match leg dims");
}

PureTwoTimeState PureTwoTimeState::product(const CVec& post, const CVec& pre) {
  CMat c = post.conjugate() * pre.transpose();
  return single(c);
}

PureTwoTimeState PureTwoTimeState::single(const CMat& coeff) {
  std::vector<TwoTimeLeg> legs{{LegRole::Out, coeff.rows(), 0},
                               {LegRole::In, coeff.cols(), 0}};
  CVec flat(coeff.size());
  for (Index i = 0; i < coeff.rows(); ++i)
    for (Index j = 0; j < coeff.cols(); ++j) flat[i * coeff.cols() + j] = coeff(i, j);
  return PureTwoTimeState(std::move(legs), std::move(flat));
}

PureTwoTimeState PureTwoTimeState::bipartite(const CVec& coeff, Index da1, Index da2,
                                             Index db1, Index db2) {
  std::vector<TwoTimeLeg> legs{{LegRole::In, da1, 0},
                               {LegRole::Out, da2, 0},
                               {LegRole::In, db1, 1},
                               {LegRole::Out, db2, 1}};
  return PureTwoTimeState(std::move(legs), coeff);
}

int PureTwoTimeState::n_parties() const {
  int p = 0;
  for (const auto& leg : legs) p = std::max(p, leg.party + 1);
  return p;
}

std::pair<Index, Index> PureTwoTimeState::party_dims(int party) const {
  Index din = 0, dout = 0;
  for (const auto& leg : legs)
    if (leg.party == party) (leg.role == LegRole::In ? din : dout) = leg.dim;
  if (din == 0 || dout == 0) throw std::invalid_argument("unknown party index");
  return {din, dout};
}

cxd bullet(const PureTwoTimeState& state, const std::vector<CMat>& op_per_party) {
  const int parties = state.n_parties();
  if (static_cast<int>(op_per_party.size()) != parties)
    throw std::invalid_argument("bullet: need one operator per party");
  std::vector<std::size_t> in_leg(parties), out_leg(parties);
  for (std::size_t l = 0; l < state.legs.size(); ++l) {
    const auto& leg = state.legs[l];
    (leg.role == LegRole::In ? in_leg : out_leg)[leg.party] = l;
  }
  for (int p = 0; p < parties; ++p) {
    const CMat& op = op_per_party[p];
    if (op.cols() != state.legs[in_leg[p]].dim || op.rows() != state.legs[out_leg[p]].dim)
      throw std::invalid_argument("bullet: operator does not match party legs");
  }

  std::vector<Index> strides(state.legs.size(), 1);
  for (int l = static_cast<int>(state.legs.size()) - 2; l >= 0; --l)
    strides[l] = strides[l + 1] * state.legs[l + 1].dim;

  cxd acc(0, 0);
  for (Index idx = 0; idx < state.coeffs.size(); ++idx) {
    cxd term = state.coeffs[idx];
    if (term == cxd(0, 0)) continue;
    for (int p = 0; p < parties; ++p) {
      Index i_in = (idx / strides[in_leg[p]]) % state.legs[in_leg[p]].dim;
      Index i_out = (idx / strides[out_leg[p]]) % state.legs[out_leg[p]].dim;
      term *= op_per_party[p](i_out, i_in);
    }
    acc += term;
  }
  return acc;
}

cxd bullet(const PureTwoTimeState& state, const CMat& op) {
  return bullet(state, std::vector<CMat>{op});
}

double outcome_weight(const PureTwoTimeState& state,
                      const std::vector<const Channel*>& outcome_per_party) {
  const int parties = state.n_parties();
  if (static_cast<int>(outcome_per_party.size()) != parties)
    throw std::invalid_argument("outcome_weight: need one outcome map per party");
  // iterate the cross product of per-party Kraus choices
  std::vector<std::size_t> pick(parties, 0);
  double total = 0.0;
  while (true) {
    std::vector<CMat> ops;
    ops.reserve(parties);
    for (int p = 0; p < parties; ++p) ops.push_back(outcome_per_party[p]->kraus[pick[p]]);
    total += std::norm(bullet(state, ops));
    int p = parties;
    while (p > 0) {
      --p;
      if (++pick[p] < outcome_per_party[p]->kraus.size()) break;
      pick[p] = 0;
      if (p == 0) return total;
    }
  }
}

double outcome_weight(const PureTwoTimeState& state, const Channel& outcome) {
  return outcome_weight(state, std::vector<const Channel*>{&outcome});
}

double abl_prob(const CVec& pre, const CVec& post, const Instrument& inst, int a) {
  if (a < 0 || a >= static_cast<int>(inst.outcomes.size()))
    throw std::invalid_argument("abl_prob: outcome index out of range");
  auto weight = [&](const Channel& ch) {
    double w = 0.0;
    for (const auto& k : ch.kraus) w += std::norm((post.adjoint() * k * pre).value());
    return w;
  };
  double denom = 0.0;
  for (const auto& ch : inst.outcomes) denom += weight(ch);
  if (denom <= kPostSelectionFloor)
    throw std::domain_error("abl_prob: impossible post-selection");
  return weight(inst.outcomes[a]) / denom;
}

double pure_prob(const PureTwoTimeState& state, const Instrument& inst, int a) {
  if (a < 0 || a >= static_cast<int>(inst.outcomes.size()))
    throw std::invalid_argument("pure_prob: outcome index out of range");
  double denom = 0.0;
  for (const auto& ch : inst.outcomes) denom += outcome_weight(state, ch);
  if (denom <= kPostSelectionFloor)
    throw std::domain_error("pure_prob: impossible post-selection");
  return outcome_weight(state, inst.outcomes[a]) / denom;
}

double ensemble_prob(const TwoTimeEnsemble& ens, const Instrument& inst, int a) {
  if (ens.members.empty()) throw std::invalid_argument("ensemble has no members");
  if (a < 0 || a >= static_cast<int>(inst.outcomes.size()))
    throw std::invalid_argument("ensemble_prob: outcome index out of range");
  double num = 0.0, denom = 0.0;
  for (const auto& m : ens.members) {
    for (std::size_t ap = 0; ap < inst.outcomes.size(); ++ap) {
      double w = m.weight * outcome_weight(m.state, inst.outcomes[ap]);
      denom += w;
      if (static_cast<int>(ap) == a) num += w;
    }
  }
  if (denom <= kPostSelectionFloor)
    throw std::domain_error("ensemble_prob: impossible post-selection");
  return num / denom;
}

double ensemble_prob(const TwoTimeEnsemble& ens, const Instrument& inst_a,
                     const Instrument& inst_b, int a, int b) {
  if (ens.members.empty()) throw std::invalid_argument("ensemble has no members");
  if (a < 0 || a >= static_cast<int>(inst_a.outcomes.size()) || b < 0 ||
      b >= static_cast<int>(inst_b.outcomes.size()))
    throw std::invalid_argument("ensemble_prob: outcome index out of range");
  double num = 0.0, denom = 0.0;
  for (const auto& m : ens.members) {
    for (std::size_t ap = 0; ap < inst_a.outcomes.size(); ++ap)
      for (std::size_t bp = 0; bp < inst_b.outcomes.size(); ++bp) {
        double w = m.weight * outcome_weight(m.state, {&inst_a.outcomes[ap],
                                                       &inst_b.outcomes[bp]});
        denom += w;
        if (static_cast<int>(ap) == a && static_cast<int>(bp) == b) num += w;
      }
  }
  if (denom <= kPostSelectionFloor)
    throw std::domain_error("ensemble_prob: impossible post-selection");
  return num / denom;
}

CMat gram_matrix(const TwoTimeEnsemble& ens) {
  if (ens.members.empty()) throw std::invalid_argument("ensemble has no members");
  const Index n = ens.members.front().state.coeffs.size();
  CMat g = CMat::Zero(n, n);
  for (const auto& m : ens.members) {
    if (m.state.coeffs.size() != n)
      throw std::invalid_argument("ensemble members have mismatched tensors");
    g += m.weight * (m.state.coeffs * m.state.coeffs.adjoint());
  }
  return g;
}

}  // namespace stq
