#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace stq {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

/// One labeled tensor factor of a composite space.
struct Slot {
  std::string label;
  Index dim = 0;
};

/// Ordered list of labeled tensor factors annotating a matrix dimension.
/// Labels are free strings so time slots ("t1") and party slots ("A1", "C2")
/// share one mechanism.
struct SlotSpace {
  std::vector<Slot> slots;

  SlotSpace() = default;
  explicit SlotSpace(std::vector<Slot> s);
  static SlotSpace qubits(const std::vector<std::string>& labels);

  Index total_dim() const;
  std::size_t size() const { return slots.size(); }
  bool has(const std::string& label) const;
  std::size_t index_of(const std::string& label) const;
  SlotSpace subspace(const std::vector<std::string>& keep) const;
  std::vector<std::size_t> positions(const std::vector<std::string>& labels) const;
};

CMat identity(Index d);
CMat kron(const CMat& a, const CMat& b);
CMat kron_all(const std::vector<CMat>& ops);

/// Pauli matrix sigma_k, k in {0,1,2,3}.
const CMat& pauli(int k);

/// n-qubit Pauli string; letters[0] acts on the leftmost tensor factor.
CMat pauli_string_matrix(const std::vector<int>& letters);

bool is_hermitian(const CMat& m, double tol = 1e-10);
double max_abs(const CMat& m);

/// Trace out every slot not listed in `keep`; kept slots stay in their
/// original order.
CMat partial_trace(const CMat& m, const SlotSpace& space,
                   const std::vector<std::string>& keep);

/// Partial trace of the outer product u v^dagger without materializing it.
CMat partial_trace_outer(const CVec& u, const CVec& v, const SlotSpace& space,
                         const std::vector<std::string>& keep);

/// Pad `op` (given on the listed slots, in that list order) with identity on
/// every other slot. Non-adjacent and reordered slot lists are handled.
CMat embed(const CMat& op, const SlotSpace& space,
           const std::vector<std::string>& acts_on);

/// Reorder the tensor factors of `m` into `new_order`.
CMat permute_slots(const CMat& m, const SlotSpace& space,
                   const std::vector<std::string>& new_order);

/// Transpose within the named slots only (computational basis).
CMat partial_transpose(const CMat& m, const SlotSpace& space,
                       const std::vector<std::string>& transposed);

struct EighResult {
  RVec eigenvalues;   // ascending
  CMat eigenvectors;  // columns
};

/// Hermitian eigendecomposition. The input is symmetrized as (m + m^dag)/2
/// before decomposition; inputs farther than `herm_tol` from Hermitian are
/// rejected.
EighResult eigh(const CMat& m, double herm_tol = 1e-10);

/// Sum of |eigenvalue| of a Hermitian matrix.
double trace_norm(const CMat& m);

/// (ab + ba)/2.
CMat anticommutator_half(const CMat& a, const CMat& b);

}  // namespace stq
