#pragma once

#include <cstdint>

#include "stq/channels.hpp"
#include "stq/tensor.hpp"

namespace stq {

/// Bipartite process matrix over slots ordered A1, A2, B1, B2 (Alice in/out,
/// Bob in/out).
struct ProcessMatrix {
  CMat matrix;
  Index dim_a1 = 2, dim_a2 = 2, dim_b1 = 2, dim_b2 = 2;

  ProcessMatrix() = default;
  ProcessMatrix(CMat m, Index a1, Index a2, Index b1, Index b2);
  static ProcessMatrix qubit(CMat m) { return ProcessMatrix(std::move(m), 2, 2, 2, 2); }

  SlotSpace space() const;
  Index total_dim() const { return dim_a1 * dim_a2 * dim_b1 * dim_b2; }
};

/// Generalized Born rule Tr[W (M^a (x) M^b)] with the CJ matrices of Alice's
/// and Bob's outcome maps.
double born_rule(const ProcessMatrix& w, const CjMatrix& ma, const CjMatrix& mb);

/// Full joint probability table P(a, b) for two instruments.
Eigen::MatrixXd born_table(const ProcessMatrix& w, const Instrument& inst_a,
                           const Instrument& inst_b);

struct ProcessReport {
  double min_eigenvalue = 0.0;   // PSD check
  double max_norm_deviation = 0.0;  // max |sum_ab P - 1| over sampled instrument pairs
  int n_samples = 0;
  std::uint64_t seed = 0;
  bool psd_ok = false;
  bool normalization_ok = false;
  bool valid = false;
};

/// Check the two validity conditions: positive semidefiniteness, and unit
/// total probability for randomly sampled CPTP instrument pairs. The
/// normalization condition quantifies over all instruments; sampling is an
/// approximation by construction.
ProcessReport validate(const ProcessMatrix& w, int n_samples = 64,
                       std::uint64_t seed = 1, double psd_tol = 1e-10,
                       double norm_tol = 1e-8);

/// q * w_bna + (1 - q) * w_anb.
ProcessMatrix causal_mixture(const ProcessMatrix& w_bna, const ProcessMatrix& w_anb,
                             double q);

/// Definite-order process "state rho into the first lab, wire channel from
/// its output into the second lab, second output discarded":
///   W = rho^{first_in} (x) CJ(wire) (x) I^{second_out},
/// reordered to A1 A2 B1 B2. `a_first` picks the order A before B.
ProcessMatrix sequential_process(const CMat& rho, const CjMatrix& wire, bool a_first);

/// Random entanglement-breaking (measure-and-prepare) channel; its CJ matrix
/// is PSD in this library's transposed-basis convention, which keeps the
/// definite-order processes built from it PSD.
Channel random_measure_prepare(Index d, int n_terms, std::mt19937_64& gen);

/// Random causally separable process matrix: a convex mixture of the two
/// definite orders with random states and random measure-and-prepare wires.
ProcessMatrix random_causal_process(std::uint64_t seed, Index d = 2);

}  // namespace stq
