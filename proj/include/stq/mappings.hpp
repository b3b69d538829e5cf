#pragma once

#include <string>
#include <vector>

#include "stq/pdm.hpp"
#include "stq/process.hpp"
#include "stq/twotime.hpp"

namespace stq {

/// A PDM realizing one post-selected branch of a two-time scenario. Branch
/// traces are joint (outcome, post-selection) probabilities; conditional
/// probabilities are formed by normalizing over outcomes.
struct PdmRealization {
  Pdm pdm;
  std::string post_label;
  bool ancilla_traced = false;

  double trace() const { return pdm.trace(); }
};

/// Three-time PDM for the simple two-time state <i| (x) |j> with instrument
/// outcome `a`: nest the outcome map and the basis post-selection into the
/// closed-form recursion. Tr equals sum_mu |<i|E^mu_a|j>|^2.
PdmRealization simple_to_pdm(Index j, Index i, const Instrument& inst, int a,
                             Index d = 2);

/// Conditional outcome table P(a | i) from branch traces; equals the ABL rule.
std::vector<double> simple_conditional(Index j, Index i, const Instrument& inst,
                                       Index d = 2);

/// Three-time PDM for a general pure two-time state through its canonical
/// physical realization: prepare sum_ij alpha_ij |j>_A |i>_C, apply the
/// outcome map on A, post-select the maximally entangled A C state, trace the
/// ancilla. Coefficients are normalized here (a physical preparation is
/// built).
PdmRealization pure_to_pdm(const PureTwoTimeState& state, const Instrument& inst,
                           int a);
std::vector<double> pure_conditional(const PureTwoTimeState& state,
                                     const Instrument& inst);

/// Weighted sum of member realizations. Member coefficient tensors enter
/// verbatim (no per-member normalization), so ensembles with unnormalized
/// members reproduce the two-time ensemble rule exactly.
PdmRealization ensemble_to_pdm(const TwoTimeEnsemble& ens, const Instrument& inst,
                               int a);
std::vector<double> ensemble_conditional(const TwoTimeEnsemble& ens,
                                         const Instrument& inst);

/// Solve sum_r p_r c_r c_r^dag = gram for a bipartite pure-state ensemble by
/// Hermitian eigendecomposition: p_r = lambda_r / Tr, c_r = sqrt(Tr) u_r,
/// eigenvalues below 1e-12 dropped. Throws on non-PSD input.
TwoTimeEnsemble solve_gram(const CMat& gram, Index da1, Index da2, Index db1,
                           Index db2);

/// The Gram tensor whose pure-state ensembles reproduce the generalized Born
/// rule of `w` under this library's CJ convention: `w` with both output slots
/// transposed. (The transposed-basis CJ convention moves a partial transpose
/// onto the process matrix; the pairing is pinned by regression tests.)
CMat bridge_gram(const ProcessMatrix& w);

/// Statistics-preserving map from a process matrix to a two-time ensemble.
TwoTimeEnsemble process_to_twotime(const ProcessMatrix& w);

/// Full pipeline: process matrix + instruments -> two-time ensemble ->
/// per-member three-time PDMs (ancilla realization) -> weighted sum with the
/// ancilla traced out. Slots (A, B) per time slice.
PdmRealization process_to_pdm(const ProcessMatrix& w, const Instrument& inst_a,
                              const Instrument& inst_b, int a, int b);

/// Conditional probability table P(a, b | phi) from branch traces of the full
/// pipeline; matches the generalized Born rule table of `w`.
Eigen::MatrixXd process_to_pdm_table(const ProcessMatrix& w,
                                     const Instrument& inst_a,
                                     const Instrument& inst_b);

/// Joint branch trace of the three-time realization of one pure state with a
/// per-party outcome choice (coefficients taken verbatim).
double realization_trace(const PureTwoTimeState& state,
                         const std::vector<const Channel*>& outcome_per_party);

}  // namespace stq
