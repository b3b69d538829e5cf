#pragma once

#include <vector>

#include "stq/channels.hpp"
#include "stq/tensor.hpp"

namespace stq {

enum class LegRole { In, Out };

/// One index leg of a two-time coefficient tensor. `party` groups an In/Out
/// pair belonging to the same lab.
struct TwoTimeLeg {
  LegRole role = LegRole::In;
  Index dim = 0;
  int party = 0;
};

/// Pure two-time state: a coefficient tensor over boundary legs, stored
/// row-major in leg order. Not required normalized; all probability rules are
/// ratios.
///
/// Conventions pinned by regression tests:
///  - single party: legs (Out i, In j), coeff c_{ij}, bullet sum_ij c_{ij} <i|E|j>
///  - bipartite:    legs (In i, Out j, In k, Out l), coeff c_{ijkl},
///                  bullet sum c_{ijkl} <j|E_A|i> <l|E_B|k>
struct PureTwoTimeState {
  std::vector<TwoTimeLeg> legs;
  CVec coeffs;

  PureTwoTimeState() = default;
  PureTwoTimeState(std::vector<TwoTimeLeg> ls, CVec cs);

  /// <post| (x) |pre> product state; coeff c_{ij} = conj(post_i) * pre_j.
  static PureTwoTimeState product(const CVec& post, const CVec& pre);
  /// General single-party state from the matrix c(i, j) = c_{ij}.
  static PureTwoTimeState single(const CMat& coeff);
  /// Bipartite state from a flat tensor indexed ((i*dA2 + j)*dB1 + k)*dB2 + l.
  static PureTwoTimeState bipartite(const CVec& coeff, Index da1, Index da2,
                                    Index db1, Index db2);

  int n_parties() const;
  /// in/out dims of one party.
  std::pair<Index, Index> party_dims(int party) const;
  double norm_squared() const { return coeffs.squaredNorm(); }
};

/// Weighted mixture of pure two-time states.
struct TwoTimeEnsemble {
  struct Member {
    double weight = 0.0;
    PureTwoTimeState state;
  };
  std::vector<Member> members;
};

/// Bullet contraction with one operator per party.
cxd bullet(const PureTwoTimeState& state, const std::vector<CMat>& op_per_party);
cxd bullet(const PureTwoTimeState& state, const CMat& op);

/// sum over Kraus combinations of |bullet|^2: the density-vector pairing of
/// the state with J_a = E_a (x) E_a^dag, evaluated without materializing J_a.
double outcome_weight(const PureTwoTimeState& state,
                      const std::vector<const Channel*>& outcome_per_party);
double outcome_weight(const PureTwoTimeState& state, const Channel& outcome);

/// Lazy density vector of one instrument outcome.
struct KrausDensityVector {
  const Channel* source = nullptr;

  explicit KrausDensityVector(const Channel& ch) : source(&ch) {}
  double contract(const PureTwoTimeState& state) const {
    return outcome_weight(state, *source);
  }
};

/// Aharonov-Bergman-Lebowitz rule: probability of outcome `a` given
/// pre-selection `pre` and post-selection `post`. Throws when the
/// post-selection is impossible (total weight below 1e-14).
double abl_prob(const CVec& pre, const CVec& post, const Instrument& inst, int a);

/// Outcome probability for a general pure two-time state (single party).
double pure_prob(const PureTwoTimeState& state, const Instrument& inst, int a);

/// Outcome probability in a two-time ensemble.
double ensemble_prob(const TwoTimeEnsemble& ens, const Instrument& inst, int a);

/// Bipartite version: joint outcome probability (a, b) for two instruments.
double ensemble_prob(const TwoTimeEnsemble& ens, const Instrument& inst_a,
                     const Instrument& inst_b, int a, int b);

/// Gram matrix sum_r p_r c_r c_r^dag over the flat coefficient index.
CMat gram_matrix(const TwoTimeEnsemble& ens);

}  // namespace stq
