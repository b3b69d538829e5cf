#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stq/channels.hpp"
#include "stq/tensor.hpp"

namespace stq {

/// An n-qubit Pauli word; letters in {0,1,2,3}, letters[0] acts on the
/// leftmost qubit.
struct PauliString {
  std::vector<int> letters;

  PauliString() = default;
  explicit PauliString(std::vector<int> ls);
  /// Decode a base-4 index into n letters, most significant letter first.
  static PauliString from_index(Index idx, int n_qubits);

  int n_qubits() const { return static_cast<int>(letters.size()); }
  bool is_identity() const;
  CMat matrix() const;
};

/// The two-outcome coarse-grained measurement {(I + s)/2, (I - s)/2} of a
/// Pauli word s. For the identity word this degenerates to {I, 0}.
struct CoarseProjectors {
  CMat plus;
  CMat minus;

  explicit CoarseProjectors(const PauliString& s);
};

/// Pseudo-density matrix over an ordered list of labeled slots. `normalized`
/// marks proper unit-trace PDMs; branch PDMs built from trace-decreasing
/// outcome maps carry normalized == false.
struct Pdm {
  CMat matrix;
  SlotSpace space;
  bool normalized = true;

  double trace() const { return matrix.trace().real(); }
};

/// Re-annotate a PDM with a finer slot division (e.g. split a two-qubit time
/// slice into per-party labels). Slot boundaries must align.
Pdm reslot(const Pdm& r, SlotSpace finer);

/// Closed-form PDM recursion: seed R = (rho1 (x) I){M}/.. R_{1..k+1} =
/// anticommutator_half(R_{1..k} (x) I, M_{k,k+1}); works for CP (trace
/// decreasing) CJ inputs too, yielding unnormalized branch PDMs.
Pdm build_closed_form(const CMat& rho1, const std::vector<CjMatrix>& chain,
                      const std::vector<std::string>& slot_labels = {});

/// Tomographic PDM assembly: enumerate every Pauli word tuple, simulate the
/// coarse-grained measurement scheme exactly (no sampling) by propagating
/// signed unnormalized branches through the channels, and sum correlator *
/// Pauli word. Independent oracle for `build_closed_form`; cost is
/// 4^{n m} * 2^m state propagations, guarded to n <= 2, m <= 3.
Pdm build_tomographic(const CMat& rho1, const std::vector<Channel>& chain,
                      const std::vector<std::string>& slot_labels = {});

/// Partial trace onto the named slots (original order kept).
Pdm marginal(const Pdm& r, const std::vector<std::string>& keep);

/// Trace norm minus one; zero for positive semidefinite R. Requires a proper
/// (normalized) PDM.
double negativity(const Pdm& r);

/// Coarse-grained joint probabilities for Pauli words at the two times of a
/// branch PDM: (1/2)(Tr R^a +- Tr[(s1 (x) s2) R^a]). Identity words are
/// rejected; they carry no measurement.
std::pair<double, double> prob_coarse(const Pdm& r_a, const PauliString& s1,
                                      const PauliString& s2);

/// Tr[(proj at slot) R^a]: Pauli eigen-projector at one time, nothing at the
/// others.
double prob_projector(const Pdm& r_a, const std::string& slot, const CMat& proj);

/// Tr R^a: probability of the recorded outcome with no measurements made.
double prob_outcome(const Pdm& r_a);

/// Two parties at three times: trace of the doubly nested recursion with
/// composite per-interval maps M_{a_k} (x) M_{b_k}. Slot order within a time
/// slice is (A, B).
double prob_multiparty(const CMat& rho1, const Channel& ma1, const Channel& mb1,
                       const Channel& ma2, const Channel& mb2);

struct PdmReport {
  double herm_residual = 0.0;
  double trace_deviation = 0.0;   // |Tr - 1|, proper PDMs only
  double min_marginal_eig = 0.0;  // over single-slot marginals, proper PDMs only
  bool ok = false;
};

/// Structural checks: Hermitian, unit trace and PSD single-slot marginals
/// (the latter two only for normalized PDMs).
PdmReport validate(const Pdm& r, double herm_tol = 1e-10, double trace_tol = 1e-10,
                   double marginal_tol = 1e-9);

}  // namespace stq
