#include "stq/tensor.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace stq {

namespace {

// Per-slot digit decomposition of a composite index, row-major.
struct IndexCodec {
  std::vector<Index> dims;
  std::vector<Index> strides;

  explicit IndexCodec(const SlotSpace& space) {
    dims.reserve(space.size());
    for (const auto& s : space.slots) dims.push_back(s.dim);
    strides.assign(dims.size(), 1);
    for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
      strides[i] = strides[i + 1] * dims[i + 1];
  }

  Index digit(Index full, std::size_t slot) const {
    return (full / strides[slot]) % dims[slot];
  }
};

// Maps every full index to its component within a slot subset (subset listed
// in the order its digits should be packed) and within the complement.
struct SplitKeys {
  std::vector<Index> sub;    // packed index over `positions`, in that order
  std::vector<Index> rest;   // packed index over the complement, space order
  Index sub_dim = 1;
  Index rest_dim = 1;

  SplitKeys(const SlotSpace& space, const std::vector<std::size_t>& positions) {
    IndexCodec codec(space);
    const Index total = space.total_dim();
    std::set<std::size_t> in_sub(positions.begin(), positions.end());
    for (std::size_t p : positions) sub_dim *= space.slots[p].dim;
    for (std::size_t s = 0; s < space.size(); ++s)
      if (!in_sub.count(s)) rest_dim *= space.slots[s].dim;

    sub.resize(total);
    rest.resize(total);
    for (Index i = 0; i < total; ++i) {
      Index k = 0;
      for (std::size_t p : positions) k = k * space.slots[p].dim + codec.digit(i, p);
      Index r = 0;
      for (std::size_t s = 0; s < space.size(); ++s)
        if (!in_sub.count(s)) r = r * space.slots[s].dim + codec.digit(i, s);
      sub[i] = k;
      rest[i] = r;
    }
  }
};

}  // namespace

SlotSpace::SlotSpace(std::vector<Slot> s) : slots(std::move(s)) {
  std::set<std::string> seen;
  for (const auto& slot : slots) {
    if (slot.dim <= 0) throw std::invalid_argument("slot dimension must be positive");
    if (!seen.insert(slot.label).second)
      throw std::invalid_argument("duplicate slot label: " + slot.label);
  }
}

SlotSpace SlotSpace::qubits(const std::vector<std::string>& labels) {
  std::vector<Slot> s;
  s.reserve(labels.size());
  for (const auto& l : labels) s.push_back({l, 2});
  return SlotSpace(std::move(s));
}

Index SlotSpace::total_dim() const {
  Index d = 1;
  for (const auto& s : slots) d *= s.dim;
  return d;
}

bool SlotSpace::has(const std::string& label) const {
  return std::any_of(slots.begin(), slots.end(),
                     [&](const Slot& s) { return s.label == label; });
}

std::size_t SlotSpace::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < slots.size(); ++i)
    if (slots[i].label == label) return i;
  throw std::invalid_argument("unknown slot label: " + label);
}

SlotSpace SlotSpace::subspace(const std::vector<std::string>& keep) const {
  std::set<std::string> k(keep.begin(), keep.end());
  for (const auto& l : keep) index_of(l);
  std::vector<Slot> out;
  for (const auto& s : slots)
    if (k.count(s.label)) out.push_back(s);
  return SlotSpace(std::move(out));
}

std::vector<std::size_t> SlotSpace::positions(const std::vector<std::string>& labels) const {
  std::vector<std::size_t> p;
  p.reserve(labels.size());
  for (const auto& l : labels) p.push_back(index_of(l));
  return p;
}

CMat identity(Index d) { return CMat::Identity(d, d); }

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat kron_all(const std::vector<CMat>& ops) {
  if (ops.empty()) throw std::invalid_argument("kron_all: empty list");
  CMat out = ops.front();
  for (std::size_t i = 1; i < ops.size(); ++i) out = kron(out, ops[i]);
  return out;
}

const CMat& pauli(int k) {
  static const std::array<CMat, 4> sigma = [] {
    std::array<CMat, 4> s;
    for (auto& m : s) m = CMat::Zero(2, 2);
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, cxd(0, -1), cxd(0, 1), 0;
    s[3] << 1, 0, 0, -1;
    return s;
  }();
  if (k < 0 || k > 3) throw std::invalid_argument("pauli index out of range");
  return sigma[k];
}

CMat pauli_string_matrix(const std::vector<int>& letters) {
  if (letters.empty()) throw std::invalid_argument("empty Pauli string");
  CMat out = pauli(letters[0]);
  for (std::size_t q = 1; q < letters.size(); ++q) out = kron(out, pauli(letters[q]));
  return out;
}

bool is_hermitian(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

double max_abs(const CMat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

CMat partial_trace(const CMat& m, const SlotSpace& space,
                   const std::vector<std::string>& keep) {
  const Index total = space.total_dim();
  if (m.rows() != total || m.cols() != total)
    throw std::invalid_argument("partial_trace: matrix does not match slot space");
  SplitKeys keys(space, space.positions(keep));
  CMat out = CMat::Zero(keys.sub_dim, keys.sub_dim);
  for (Index r = 0; r < total; ++r)
    for (Index c = 0; c < total; ++c)
      if (keys.rest[r] == keys.rest[c]) out(keys.sub[r], keys.sub[c]) += m(r, c);
  return out;
}

CMat partial_trace_outer(const CVec& u, const CVec& v, const SlotSpace& space,
                         const std::vector<std::string>& keep) {
  const Index total = space.total_dim();
  if (u.size() != total || v.size() != total)
    throw std::invalid_argument("partial_trace_outer: vector does not match slot space");
  SplitKeys keys(space, space.positions(keep));
  // compose[k * rest_dim + t] = full index with kept part k, traced part t
  std::vector<Index> compose(static_cast<std::size_t>(keys.sub_dim * keys.rest_dim));
  for (Index i = 0; i < total; ++i)
    compose[keys.sub[i] * keys.rest_dim + keys.rest[i]] = i;
  CMat out = CMat::Zero(keys.sub_dim, keys.sub_dim);
  for (Index k = 0; k < keys.sub_dim; ++k)
    for (Index k2 = 0; k2 < keys.sub_dim; ++k2) {
      cxd acc(0, 0);
      for (Index t = 0; t < keys.rest_dim; ++t)
        acc += u[compose[k * keys.rest_dim + t]] *
               std::conj(v[compose[k2 * keys.rest_dim + t]]);
      out(k, k2) = acc;
    }
  return out;
}

CMat embed(const CMat& op, const SlotSpace& space,
           const std::vector<std::string>& acts_on) {
  const Index total = space.total_dim();
  SplitKeys keys(space, space.positions(acts_on));
  if (op.rows() != keys.sub_dim || op.cols() != keys.sub_dim)
    throw std::invalid_argument("embed: operator does not match named slots");
  CMat out = CMat::Zero(total, total);
  for (Index r = 0; r < total; ++r)
    for (Index c = 0; c < total; ++c)
      if (keys.rest[r] == keys.rest[c]) out(r, c) = op(keys.sub[r], keys.sub[c]);
  return out;
}

CMat permute_slots(const CMat& m, const SlotSpace& space,
                   const std::vector<std::string>& new_order) {
  const Index total = space.total_dim();
  if (m.rows() != total || m.cols() != total)
    throw std::invalid_argument("permute_slots: matrix does not match slot space");
  if (new_order.size() != space.size())
    throw std::invalid_argument("permute_slots: order must list every slot");
  SplitKeys keys(space, space.positions(new_order));
  if (keys.rest_dim != 1)
    throw std::invalid_argument("permute_slots: order must list every slot");
  CMat out(total, total);
  for (Index r = 0; r < total; ++r)
    for (Index c = 0; c < total; ++c) out(keys.sub[r], keys.sub[c]) = m(r, c);
  return out;
}

CMat partial_transpose(const CMat& m, const SlotSpace& space,
                       const std::vector<std::string>& transposed) {
  const Index total = space.total_dim();
  if (m.rows() != total || m.cols() != total)
    throw std::invalid_argument("partial_transpose: matrix does not match slot space");
  SplitKeys keys(space, space.positions(transposed));
  // out(r, c) = m(r with transposed digits from c, c with transposed digits from r)
  std::vector<Index> compose(static_cast<std::size_t>(total));
  for (Index i = 0; i < total; ++i) compose[keys.sub[i] * keys.rest_dim + keys.rest[i]] = i;
  CMat out(total, total);
  for (Index r = 0; r < total; ++r)
    for (Index c = 0; c < total; ++c) {
      Index r2 = compose[keys.sub[c] * keys.rest_dim + keys.rest[r]];
      Index c2 = compose[keys.sub[r] * keys.rest_dim + keys.rest[c]];
      out(r, c) = m(r2, c2);
    }
  return out;
}

EighResult eigh(const CMat& m, double herm_tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigh: matrix not square");
  if (!is_hermitian(m, herm_tol))
    throw std::domain_error("eigh: input is not Hermitian within tolerance");
  CMat sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(sym);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigh: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double trace_norm(const CMat& m) {
  return eigh(m).eigenvalues.cwiseAbs().sum();
}

CMat anticommutator_half(const CMat& a, const CMat& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument("anticommutator_half: dimension mismatch");
  return 0.5 * (a * b + b * a);
}

}  // namespace stq
