#include "stq/process.hpp"

#include <stdexcept>

namespace stq {

ProcessMatrix::ProcessMatrix(CMat m, Index a1, Index a2, Index b1, Index b2)
    : matrix(std::move(m)), dim_a1(a1), dim_a2(a2), dim_b1(b1), dim_b2(b2) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != total_dim())
    throw std::invalid_argument("process matrix does not match slot dims");
}

SlotSpace ProcessMatrix::space() const {
  return SlotSpace({{"A1", dim_a1}, {"A2", dim_a2}, {"B1", dim_b1}, {"B2", dim_b2}});
}

double born_rule(const ProcessMatrix& w, const CjMatrix& ma, const CjMatrix& mb) {
  if (ma.dim_in != w.dim_a1 || ma.dim_out != w.dim_a2 || mb.dim_in != w.dim_b1 ||
      mb.dim_out != w.dim_b2)
    throw std::invalid_argument("born_rule: CJ matrices do not match process slots");
  return (w.matrix * kron(ma.matrix, mb.matrix)).trace().real();
}

Eigen::MatrixXd born_table(const ProcessMatrix& w, const Instrument& inst_a,
                           const Instrument& inst_b) {
  Eigen::MatrixXd table(inst_a.outcomes.size(), inst_b.outcomes.size());
  for (std::size_t a = 0; a < inst_a.outcomes.size(); ++a) {
    CjMatrix ma = cj_matrix(inst_a.outcomes[a]);
    for (std::size_t b = 0; b < inst_b.outcomes.size(); ++b)
      table(a, b) = born_rule(w, ma, cj_matrix(inst_b.outcomes[b]));
  }
  return table;
}

ProcessReport validate(const ProcessMatrix& w, int n_samples, std::uint64_t seed,
                       double psd_tol, double norm_tol) {
  ProcessReport rep;
  rep.n_samples = n_samples;
  rep.seed = seed;
  rep.min_eigenvalue = eigh(w.matrix).eigenvalues.minCoeff();
  rep.psd_ok = rep.min_eigenvalue >= -psd_tol;

  std::mt19937_64 gen(seed);
  for (int s = 0; s < n_samples; ++s) {
    std::uint64_t sa = gen(), sb = gen();
    Channel ca = random_cptp(w.dim_a1, w.dim_a2, 1 + static_cast<int>(sa % 3), sa);
    Channel cb = random_cptp(w.dim_b1, w.dim_b2, 1 + static_cast<int>(sb % 3), sb);
    double total = born_rule(w, cj_matrix(ca), cj_matrix(cb));
    rep.max_norm_deviation = std::max(rep.max_norm_deviation, std::abs(total - 1.0));
  }
  rep.normalization_ok = rep.max_norm_deviation <= norm_tol;
  rep.valid = rep.psd_ok && rep.normalization_ok;
  return rep;
}

ProcessMatrix causal_mixture(const ProcessMatrix& w_bna, const ProcessMatrix& w_anb,
                             double q) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("causal_mixture: q must be in [0,1]");
  if (w_bna.matrix.rows() != w_anb.matrix.rows())
    throw std::invalid_argument("causal_mixture: dimension mismatch");
  ProcessMatrix out = w_anb;
  out.matrix = q * w_bna.matrix + (1.0 - q) * w_anb.matrix;
  return out;
}

ProcessMatrix sequential_process(const CMat& rho, const CjMatrix& wire, bool a_first) {
  const Index d1 = rho.rows();
  const Index d2 = wire.dim_in;
  const Index d3 = wire.dim_out;
  CMat w = kron(kron(rho, wire.matrix), identity(d3));
  if (a_first)  // already ordered A1 A2 B1 B2
    return ProcessMatrix(std::move(w), d1, d2, d3, d3);
  // built on B1 B2 A1 A2; reorder
  SlotSpace built({{"B1", d1}, {"B2", d2}, {"A1", d3}, {"A2", d3}});
  CMat perm = permute_slots(w, built, {"A1", "A2", "B1", "B2"});
  return ProcessMatrix(std::move(perm), d3, d3, d1, d2);
}

Channel random_measure_prepare(Index d, int n_terms, std::mt19937_64& gen) {
  if (n_terms < 1) throw std::invalid_argument("need at least one POVM term");
  // random POVM {F_t}
  std::vector<CMat> raw;
  CMat total = CMat::Zero(d, d);
  for (int t = 0; t < n_terms; ++t) {
    CMat g = randn_complex(gen, d, d);
    raw.push_back(g * g.adjoint());
    total += raw.back();
  }
  EighResult es = eigh(total);
  CMat inv_sqrt = es.eigenvectors *
                  es.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal() *
                  es.eigenvectors.adjoint();
  // Kraus operators sqrt(mu_j phi_i) |g_j><f_i| realize X -> sum_t Tr(F_t X) tau_t
  std::vector<CMat> kraus;
  for (int t = 0; t < n_terms; ++t) {
    CMat f = inv_sqrt * raw[t] * inv_sqrt;
    CMat tau = random_density(d, gen);
    EighResult ef = eigh(f);
    EighResult et = eigh(tau);
    for (Index i = 0; i < d; ++i) {
      if (ef.eigenvalues[i] < 1e-13) continue;
      for (Index j = 0; j < d; ++j) {
        if (et.eigenvalues[j] < 1e-13) continue;
        double c = std::sqrt(ef.eigenvalues[i] * et.eigenvalues[j]);
        kraus.push_back(c * et.eigenvectors.col(j) * ef.eigenvectors.col(i).adjoint());
      }
    }
  }
  return Channel(d, d, std::move(kraus));
}

ProcessMatrix random_causal_process(std::uint64_t seed, Index d) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  CMat rho_a = random_density(d, gen);
  CMat rho_b = random_density(d, gen);
  CjMatrix wire_ab = cj_matrix(random_measure_prepare(d, 2, gen));
  CjMatrix wire_ba = cj_matrix(random_measure_prepare(d, 2, gen));
  ProcessMatrix w_anb = sequential_process(rho_a, wire_ab, true);
  ProcessMatrix w_bna = sequential_process(rho_b, wire_ba, false);
  return causal_mixture(w_bna, w_anb, unif(gen));
}

}  // namespace stq
