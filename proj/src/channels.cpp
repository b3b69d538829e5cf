#include "stq/channels.hpp"

#include <stdexcept>

namespace stq {

Channel::Channel(Index din, Index dout, std::vector<CMat> ops)
    : dim_in(din), dim_out(dout), kraus(std::move(ops)) {
  if (dim_in <= 0 || dim_out <= 0)
    throw std::invalid_argument("channel dimensions must be positive");
  if (kraus.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
  for (const auto& k : kraus)
    if (k.rows() != dim_out || k.cols() != dim_in)
      throw std::invalid_argument("Kraus operator shape does not match channel dims");
}

CMat Channel::apply(const CMat& rho) const {
  if (rho.rows() != dim_in || rho.cols() != dim_in)
    throw std::invalid_argument("apply: state dimension mismatch");
  CMat out = CMat::Zero(dim_out, dim_out);
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return out;
}

CMat Channel::kraus_sum() const {
  CMat s = CMat::Zero(dim_in, dim_in);
  for (const auto& k : kraus) s += k.adjoint() * k;
  return s;
}

Index Instrument::dim_in() const {
  if (outcomes.empty()) throw std::invalid_argument("empty instrument");
  return outcomes.front().dim_in;
}

Index Instrument::dim_out() const {
  if (outcomes.empty()) throw std::invalid_argument("empty instrument");
  return outcomes.front().dim_out;
}

Channel Instrument::summed() const {
  std::vector<CMat> all;
  for (const auto& ch : outcomes)
    for (const auto& k : ch.kraus) all.push_back(k);
  return Channel(dim_in(), dim_out(), std::move(all));
}

SlotSpace CjMatrix::space(const std::string& in_label, const std::string& out_label) const {
  return SlotSpace({{in_label, dim_in}, {out_label, dim_out}});
}

CjMatrix cj_matrix(const Channel& ch) {
  const Index din = ch.dim_in, dout = ch.dim_out;
  CMat m = CMat::Zero(din * dout, din * dout);
  // M((i,j),(m,n)) = sum_mu K(j,m) conj(K(n,i)); row index = i*dout + j
  for (const auto& k : ch.kraus)
    for (Index i = 0; i < din; ++i)
      for (Index j = 0; j < dout; ++j)
        for (Index m2 = 0; m2 < din; ++m2)
          for (Index n = 0; n < dout; ++n)
            m(i * dout + j, m2 * dout + n) += k(j, m2) * std::conj(k(n, i));
  return {std::move(m), din, dout};
}

CMat apply_cj(const CjMatrix& cj, const CMat& rho) {
  if (rho.rows() != cj.dim_in || rho.cols() != cj.dim_in)
    throw std::invalid_argument("apply_cj: state dimension mismatch");
  // Tr_in[(rho (x) I_out) M]; the input-basis transpose of the CJ convention
  // makes the contraction direct
  SlotSpace sp = cj.space();
  CMat big = kron(rho, identity(cj.dim_out)) * cj.matrix;
  return partial_trace(big, sp, {"out"});
}

ChannelReport validate(const Channel& ch, ValidateMode mode, double tol) {
  ChannelReport rep;
  CMat s = ch.kraus_sum();
  rep.tp_residual = max_abs(s - identity(ch.dim_in));
  double lam_max = eigh(s, 1e-8).eigenvalues.maxCoeff();
  rep.tni_excess = std::max(0.0, lam_max - 1.0);
  switch (mode) {
    case ValidateMode::Cp:
      rep.ok = rep.tni_excess <= tol;
      break;
    case ValidateMode::Cptp:
    case ValidateMode::InstrumentSum:
      rep.ok = rep.tp_residual <= tol;
      break;
  }
  return rep;
}

ChannelReport validate(const Instrument& inst, double tol) {
  return validate(inst.summed(), ValidateMode::InstrumentSum, tol);
}

Channel tensor_channel(const Channel& a, const Channel& b) {
  std::vector<CMat> ops;
  ops.reserve(a.kraus.size() * b.kraus.size());
  for (const auto& ka : a.kraus)
    for (const auto& kb : b.kraus) ops.push_back(kron(ka, kb));
  return Channel(a.dim_in * b.dim_in, a.dim_out * b.dim_out, std::move(ops));
}

Channel identity_channel(Index d) { return Channel(d, d, {identity(d)}); }

Channel basis_projector_channel(Index i, Index d) {
  if (i < 0 || i >= d) throw std::invalid_argument("basis index out of range");
  CMat p = CMat::Zero(d, d);
  p(i, i) = 1.0;
  return Channel(d, d, {p});
}

Channel single_kraus_channel(const CMat& op) {
  return Channel(op.cols(), op.rows(), {op});
}

CMat randn_complex(std::mt19937_64& gen, Index rows, Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMat m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      double re = n(gen), im = n(gen);
      m(i, j) = cxd(re, im);
    }
  return m;
}

CMat haar_unitary(Index d, std::mt19937_64& gen) {
  CMat g = randn_complex(gen, d, d);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the phase ambiguity of QR so the distribution is Haar
  for (Index i = 0; i < d; ++i) {
    cxd diag = r(i, i);
    cxd phase = std::abs(diag) > 0 ? diag / std::abs(diag) : cxd(1, 0);
    q.col(i) *= phase;
  }
  return q;
}

Channel random_cptp(Index dim_in, Index dim_out, int n_kraus, std::uint64_t seed) {
  if (n_kraus < 1) throw std::invalid_argument("random_cptp: n_kraus must be >= 1");
  const Index env = n_kraus;
  if (dim_out * env < dim_in)
    throw std::invalid_argument("random_cptp: dim_out * n_kraus < dim_in");
  std::mt19937_64 gen(seed);
  CMat u = haar_unitary(dim_out * env, gen);
  CMat isometry = u.leftCols(dim_in);
  std::vector<CMat> ops;
  ops.reserve(n_kraus);
  for (int mu = 0; mu < n_kraus; ++mu)
    ops.push_back(isometry.middleRows(mu * dim_out, dim_out));
  return Channel(dim_in, dim_out, std::move(ops));
}

Instrument random_instrument(Index dim, int n_outcomes, std::uint64_t seed,
                             int kraus_per_outcome) {
  if (n_outcomes < 1 || kraus_per_outcome < 1)
    throw std::invalid_argument("random_instrument: counts must be >= 1");
  Channel total = random_cptp(dim, dim, n_outcomes * kraus_per_outcome, seed);
  Instrument inst;
  for (int a = 0; a < n_outcomes; ++a) {
    std::vector<CMat> ops(total.kraus.begin() + a * kraus_per_outcome,
                          total.kraus.begin() + (a + 1) * kraus_per_outcome);
    inst.outcomes.emplace_back(dim, dim, std::move(ops));
  }
  return inst;
}

CMat random_density(Index d, std::mt19937_64& gen) {
  CMat g = randn_complex(gen, d, d);
  CMat rho = g * g.adjoint();
  return rho / rho.trace();
}

CVec random_ket(Index d, std::mt19937_64& gen) {
  CVec v = randn_complex(gen, d, 1);
  return v / v.norm();
}

}  // namespace stq
