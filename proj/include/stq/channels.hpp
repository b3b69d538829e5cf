#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "stq/tensor.hpp"

namespace stq {

/// A completely positive map in Kraus form. Trace preservation is a property
/// of the Kraus set, not a stored flag; query it through `validate`.
struct Channel {
  Index dim_in = 0;
  Index dim_out = 0;
  std::vector<CMat> kraus;

  Channel() = default;
  Channel(Index din, Index dout, std::vector<CMat> ops);

  /// sum_mu E_mu rho E_mu^dag
  CMat apply(const CMat& rho) const;

  /// sum_mu E_mu^dag E_mu
  CMat kraus_sum() const;
};

/// A set of CP maps (one per recorded outcome) summing to a CPTP map.
struct Instrument {
  std::vector<Channel> outcomes;

  Index dim_in() const;
  Index dim_out() const;
  /// All Kraus operators of all outcomes as one channel.
  Channel summed() const;
};

/// Choi-Jamiolkowski matrix sum_{m,n} |n><m| (x) M(|m><n|) on
/// (input slot) (x) (output slot). The transpose on the input factor is taken
/// in the computational basis, fixed once for the whole library.
struct CjMatrix {
  CMat matrix;
  Index dim_in = 0;
  Index dim_out = 0;

  Index total_dim() const { return dim_in * dim_out; }
  SlotSpace space(const std::string& in_label = "in",
                  const std::string& out_label = "out") const;
};

CjMatrix cj_matrix(const Channel& ch);

/// Reconstruct the channel action on rho from a CJ matrix:
/// M(rho) = Tr_in[(rho^T (x) I) M]. Inverse of `cj_matrix` on states.
CMat apply_cj(const CjMatrix& cj, const CMat& rho);

enum class ValidateMode { Cp, Cptp, InstrumentSum };

struct ChannelReport {
  bool ok = false;
  /// max-norm distance of sum E^dag E from the identity
  double tp_residual = 0.0;
  /// how far the largest eigenvalue of sum E^dag E exceeds 1
  double tni_excess = 0.0;
};

/// Report-only check of the completeness relation. Cp means trace
/// non-increasing (sum E^dag E <= I), Cptp means equality, InstrumentSum
/// checks the summed map of an instrument for trace preservation.
ChannelReport validate(const Channel& ch, ValidateMode mode, double tol = 1e-10);
ChannelReport validate(const Instrument& inst, double tol = 1e-10);

/// Kraus cross products; the first factor is the leftmost tensor slot.
Channel tensor_channel(const Channel& a, const Channel& b);

Channel identity_channel(Index d);

/// Projector channel rho -> |i><i| rho |i><i| on a d-dimensional space.
Channel basis_projector_channel(Index i, Index d);

/// rho -> P rho P for a (rank-any) projector or general operator P.
Channel single_kraus_channel(const CMat& op);

CMat randn_complex(std::mt19937_64& gen, Index rows, Index cols);
CMat haar_unitary(Index d, std::mt19937_64& gen);

/// Seed-deterministic random CPTP channel: slice an isometry column block out
/// of a Haar unitary on output (x) environment. Requires
/// dim_out * n_kraus >= dim_in.
Channel random_cptp(Index dim_in, Index dim_out, int n_kraus, std::uint64_t seed);

/// Random instrument: a random CPTP channel whose Kraus list is split into
/// `n_outcomes` groups of `kraus_per_outcome`.
Instrument random_instrument(Index dim, int n_outcomes, std::uint64_t seed,
                             int kraus_per_outcome = 1);

/// Random density matrix (normalized Wishart).
CMat random_density(Index d, std::mt19937_64& gen);
CVec random_ket(Index d, std::mt19937_64& gen);

}  // namespace stq
