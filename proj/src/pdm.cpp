#include "stq/pdm.hpp"

#include <cmath>
#include <stdexcept>

namespace stq {

namespace {

int qubit_count(Index d) {
  int n = 0;
  Index x = d;
  while (x > 1) {
    if (x % 2 != 0) throw std::invalid_argument("dimension is not a power of two");
    x /= 2;
    ++n;
  }
  if (n == 0) throw std::invalid_argument("dimension must be at least 2");
  return n;
}

std::vector<std::string> default_labels(std::size_t m) {
  std::vector<std::string> ls;
  ls.reserve(m);
  for (std::size_t k = 0; k < m; ++k) ls.push_back("t" + std::to_string(k + 1));
  return ls;
}

bool near_unit_trace(const CMat& m) { return std::abs(m.trace().real() - 1.0) <= 1e-9; }

}  // namespace

PauliString::PauliString(std::vector<int> ls) : letters(std::move(ls)) {
  if (letters.empty()) throw std::invalid_argument("empty Pauli string");
  for (int l : letters)
    if (l < 0 || l > 3) throw std::invalid_argument("Pauli letter out of range");
}

PauliString PauliString::from_index(Index idx, int n_qubits) {
  std::vector<int> ls(n_qubits);
  for (int q = n_qubits - 1; q >= 0; --q) {
    ls[q] = static_cast<int>(idx % 4);
    idx /= 4;
  }
  return PauliString(ls);
}

bool PauliString::is_identity() const {
  for (int l : letters)
    if (l != 0) return false;
  return true;
}

CMat PauliString::matrix() const { return pauli_string_matrix(letters); }

CoarseProjectors::CoarseProjectors(const PauliString& s) {
  CMat sigma = s.matrix();
  CMat id = identity(sigma.rows());
  plus = 0.5 * (id + sigma);
  minus = 0.5 * (id - sigma);
}

Pdm reslot(const Pdm& r, SlotSpace finer) {
  if (finer.total_dim() != r.space.total_dim())
    throw std::invalid_argument("reslot: total dimension mismatch");
  // finer slot boundaries must align with the existing ones
  std::size_t f = 0;
  for (const auto& coarse : r.space.slots) {
    Index acc = 1;
    while (acc < coarse.dim) {
      if (f >= finer.size()) throw std::invalid_argument("reslot: boundary mismatch");
      acc *= finer.slots[f++].dim;
    }
    if (acc != coarse.dim) throw std::invalid_argument("reslot: boundary mismatch");
  }
  return Pdm{r.matrix, std::move(finer), r.normalized};
}

Pdm build_closed_form(const CMat& rho1, const std::vector<CjMatrix>& chain,
                      const std::vector<std::string>& slot_labels) {
  if (rho1.rows() != rho1.cols()) throw std::invalid_argument("rho1 must be square");
  if (chain.empty()) throw std::invalid_argument("need at least one channel");
  const std::size_t m = chain.size() + 1;
  auto labels = slot_labels.empty() ? default_labels(m) : slot_labels;
  if (labels.size() != m) throw std::invalid_argument("need one label per time slot");
  if (chain.front().dim_in != rho1.rows())
    throw std::invalid_argument("first channel does not match the initial state");
  for (std::size_t k = 1; k < chain.size(); ++k)
    if (chain[k].dim_in != chain[k - 1].dim_out)
      throw std::invalid_argument("channel chain dimensions do not compose");

  SlotSpace space({{labels[0], rho1.rows()}, {labels[1], chain[0].dim_out}});
  CMat r = kron(rho1, identity(chain[0].dim_out));
  r = anticommutator_half(r, chain[0].matrix);
  for (std::size_t k = 1; k < chain.size(); ++k) {
    auto slots = space.slots;
    slots.push_back({labels[k + 1], chain[k].dim_out});
    space = SlotSpace(std::move(slots));
    r = kron(r, identity(chain[k].dim_out));
    CMat mk = embed(chain[k].matrix, space, {labels[k], labels[k + 1]});
    r = anticommutator_half(r, mk);
  }
  bool norm = near_unit_trace(r);
  return Pdm{std::move(r), std::move(space), norm};
}

Pdm build_tomographic(const CMat& rho1, const std::vector<Channel>& chain,
                      const std::vector<std::string>& slot_labels) {
  const int n = qubit_count(rho1.rows());
  const std::size_t m = chain.size() + 1;
  if (n > 2 || m > 3)
    throw std::invalid_argument("tomographic build guarded to n <= 2 qubits, m <= 3 times");
  for (const auto& ch : chain)
    if (ch.dim_in != rho1.rows() || ch.dim_out != rho1.rows())
      throw std::invalid_argument("tomographic build needs equal dims along the chain");
  auto labels = slot_labels.empty() ? default_labels(m) : slot_labels;
  if (labels.size() != m) throw std::invalid_argument("need one label per time slot");

  const Index d = rho1.rows();
  const Index n_strings = Index(1) << (2 * n);  // 4^n
  Index total = 1;
  for (std::size_t k = 0; k < m; ++k) total *= d;

  CMat r = CMat::Zero(total, total);
  std::vector<Index> tuple(m, 0);
  std::vector<CMat> words(m);
  while (true) {
    for (std::size_t k = 0; k < m; ++k)
      words[k] = PauliString::from_index(tuple[k], n).matrix();

    // exact correlator: propagate signed unnormalized branches
    struct Branch {
      double sign;
      CMat state;
    };
    std::vector<Branch> branches{{1.0, rho1}};
    for (std::size_t alpha = 0; alpha < m; ++alpha) {
      if (tuple[alpha] != 0) {
        CoarseProjectors cp(PauliString::from_index(tuple[alpha], n));
        std::vector<Branch> next;
        next.reserve(branches.size() * 2);
        for (const auto& b : branches) {
          next.push_back({b.sign, cp.plus * b.state * cp.plus});
          next.push_back({-b.sign, cp.minus * b.state * cp.minus});
        }
        branches = std::move(next);
      }
      if (alpha + 1 < m)
        for (auto& b : branches) b.state = chain[alpha].apply(b.state);
    }
    double corr = 0.0;
    for (const auto& b : branches) corr += b.sign * b.state.trace().real();

    CMat word = words[0];
    for (std::size_t k = 1; k < m; ++k) word = kron(word, words[k]);
    r += corr * word;

    std::size_t k = m;
    while (k > 0) {
      --k;
      if (++tuple[k] < n_strings) break;
      tuple[k] = 0;
      if (k == 0) goto done;
    }
  }
done:
  r /= std::pow(2.0, static_cast<double>(m) * n);
  std::vector<Slot> slots;
  for (std::size_t k = 0; k < m; ++k) slots.push_back({labels[k], d});
  bool norm = near_unit_trace(r);
  return Pdm{std::move(r), SlotSpace(std::move(slots)), norm};
}

Pdm marginal(const Pdm& r, const std::vector<std::string>& keep) {
  if (keep.empty()) throw std::invalid_argument("marginal: keep set must not be empty");
  CMat m = partial_trace(r.matrix, r.space, keep);
  return Pdm{std::move(m), r.space.subspace(keep), r.normalized};
}

double negativity(const Pdm& r) {
  if (!r.normalized)
    throw std::domain_error("negativity is defined for unit-trace PDMs only");
  return trace_norm(r.matrix) - 1.0;
}

std::pair<double, double> prob_coarse(const Pdm& r_a, const PauliString& s1,
                                      const PauliString& s2) {
  if (r_a.space.size() != 2)
    throw std::invalid_argument("prob_coarse expects a two-time PDM");
  if (s1.is_identity() || s2.is_identity())
    throw std::invalid_argument("prob_coarse: identity word carries no measurement");
  CMat obs = kron(s1.matrix(), s2.matrix());
  if (obs.rows() != r_a.matrix.rows())
    throw std::invalid_argument("prob_coarse: Pauli words do not match slot dims");
  double tr = r_a.trace();
  double corr = (obs * r_a.matrix).trace().real();
  return {0.5 * (tr + corr), 0.5 * (tr - corr)};
}

double prob_projector(const Pdm& r_a, const std::string& slot, const CMat& proj) {
  CMat full = embed(proj, r_a.space, {slot});
  return (full * r_a.matrix).trace().real();
}

double prob_outcome(const Pdm& r_a) { return r_a.trace(); }

double prob_multiparty(const CMat& rho1, const Channel& ma1, const Channel& mb1,
                       const Channel& ma2, const Channel& mb2) {
  Channel first = tensor_channel(ma1, mb1);
  Channel second = tensor_channel(ma2, mb2);
  if (first.dim_in != rho1.rows())
    throw std::invalid_argument("prob_multiparty: state does not match party dims");
  Pdm r = build_closed_form(rho1, {cj_matrix(first), cj_matrix(second)});
  return r.trace();
}

PdmReport validate(const Pdm& r, double herm_tol, double trace_tol, double marginal_tol) {
  PdmReport rep;
  rep.herm_residual = max_abs(r.matrix - r.matrix.adjoint());
  rep.ok = rep.herm_residual <= herm_tol;
  if (r.normalized) {
    rep.trace_deviation = std::abs(r.trace() - 1.0);
    rep.ok = rep.ok && rep.trace_deviation <= trace_tol;
    rep.min_marginal_eig = 0.0;
    for (const auto& slot : r.space.slots) {
      Pdm single = marginal(r, {slot.label});
      double lo = eigh(single.matrix).eigenvalues.minCoeff();
      rep.min_marginal_eig = std::min(rep.min_marginal_eig, lo);
    }
    rep.ok = rep.ok && rep.min_marginal_eig >= -marginal_tol;
  }
  return rep;
}

}  // namespace stq
