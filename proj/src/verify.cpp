#include "stq/verify.hpp"

#include <algorithm>
#include <stdexcept>

namespace stq {

namespace {

void record(SuiteResult& res, const std::string& name, double dev) {
  for (auto& [n, d] : res.deviations)
    if (n == name) {
      d = std::max(d, dev);
      return;
    }
  res.deviations.emplace_back(name, dev);
}

double table_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Instrument trial_instrument(std::mt19937_64& gen, Index dim) {
  int n_out = 2 + static_cast<int>(gen() % 2);
  int per = 1 + static_cast<int>(gen() % 2);
  return random_instrument(dim, n_out, gen(), per);
}

}  // namespace

double SuiteResult::max_deviation() const {
  double m = 0.0;
  for (const auto& [name, dev] : deviations) m = std::max(m, dev);
  return m;
}

SuiteResult verify_pdm_oracle(int trials, std::uint64_t seed) {
  SuiteResult res{"pdm-oracle", trials, seed, {}};
  record(res, "closed_form_vs_tomographic", 0.0);
  record(res, "single_time_marginals", 0.0);
  std::mt19937_64 gen(seed);
  const int configs[3][2] = {{1, 2}, {1, 3}, {2, 2}};
  for (int t = 0; t < trials; ++t) {
    const int n = configs[t % 3][0];
    const int m = configs[t % 3][1];
    const Index d = Index(1) << n;
    CMat rho1 = random_density(d, gen);
    std::vector<Channel> chain;
    std::vector<CjMatrix> cjs;
    for (int k = 0; k + 1 < m; ++k) {
      chain.push_back(random_cptp(d, d, 1 + static_cast<int>(gen() % 3), gen()));
      cjs.push_back(cj_matrix(chain.back()));
    }
    Pdm closed = build_closed_form(rho1, cjs);
    Pdm tomo = build_tomographic(rho1, chain);
    record(res, "closed_form_vs_tomographic", max_abs(closed.matrix - tomo.matrix));

    CMat rho_t = rho1;
    for (int k = 0; k < m; ++k) {
      std::string label = "t" + std::to_string(k + 1);
      Pdm single = marginal(closed, {label});
      record(res, "single_time_marginals", max_abs(single.matrix - rho_t));
      if (k + 1 < m) rho_t = chain[k].apply(rho_t);
    }
  }
  return res;
}

SuiteResult verify_abl(int trials, std::uint64_t seed) {
  SuiteResult res{"abl", trials, seed, {}};
  record(res, "pdm_conditional_vs_abl", 0.0);
  std::mt19937_64 gen(seed);
  for (int t = 0; t < trials; ++t) {
    Instrument inst = trial_instrument(gen, 2);
    Index j = gen() % 2, i = gen() % 2;
    CVec pre = CVec::Zero(2), post = CVec::Zero(2);
    pre[j] = 1.0;
    post[i] = 1.0;
    std::vector<double> table = simple_conditional(j, i, inst, 2);
    std::vector<double> abl;
    abl.reserve(inst.outcomes.size());
    for (int a = 0; a < static_cast<int>(inst.outcomes.size()); ++a)
      abl.push_back(abl_prob(pre, post, inst, a));
    record(res, "pdm_conditional_vs_abl", table_diff(table, abl));
  }
  return res;
}

SuiteResult verify_pure(int trials, std::uint64_t seed) {
  SuiteResult res{"pure", trials, seed, {}};
  record(res, "pdm_conditional_vs_pure_rule", 0.0);
  std::mt19937_64 gen(seed);
  for (int t = 0; t < trials; ++t) {
    Instrument inst = trial_instrument(gen, 2);
    PureTwoTimeState state = PureTwoTimeState::single(randn_complex(gen, 2, 2));
    std::vector<double> table = pure_conditional(state, inst);
    std::vector<double> rule;
    rule.reserve(inst.outcomes.size());
    for (int a = 0; a < static_cast<int>(inst.outcomes.size()); ++a)
      rule.push_back(pure_prob(state, inst, a));
    record(res, "pdm_conditional_vs_pure_rule", table_diff(table, rule));
  }
  return res;
}

SuiteResult verify_ensemble(int trials, std::uint64_t seed) {
  SuiteResult res{"ensemble", trials, seed, {}};
  record(res, "pdm_conditional_vs_ensemble_rule", 0.0);
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  for (int t = 0; t < trials; ++t) {
    Instrument inst = trial_instrument(gen, 2);
    TwoTimeEnsemble ens;
    int members = 2 + static_cast<int>(gen() % 2);
    double total = 0.0;
    std::vector<double> weights;
    for (int r = 0; r < members; ++r) {
      weights.push_back(unif(gen));
      total += weights.back();
    }
    for (int r = 0; r < members; ++r)
      ens.members.push_back(
          {weights[r] / total, PureTwoTimeState::single(randn_complex(gen, 2, 2))});
    std::vector<double> table = ensemble_conditional(ens, inst);
    std::vector<double> rule;
    rule.reserve(inst.outcomes.size());
    for (int a = 0; a < static_cast<int>(inst.outcomes.size()); ++a)
      rule.push_back(ensemble_prob(ens, inst, a));
    record(res, "pdm_conditional_vs_ensemble_rule", table_diff(table, rule));
  }
  return res;
}

SuiteResult verify_bridge(int trials, std::uint64_t seed) {
  SuiteResult res{"bridge", trials, seed, {}};
  record(res, "born_vs_twotime", 0.0);
  record(res, "born_vs_pdm_pipeline", 0.0);
  std::mt19937_64 gen(seed);
  for (int t = 0; t < trials; ++t) {
    ProcessMatrix w = random_causal_process(gen());
    Instrument ia = trial_instrument(gen, 2);
    Instrument ib = trial_instrument(gen, 2);
    Eigen::MatrixXd born = born_table(w, ia, ib);
    TwoTimeEnsemble ens = process_to_twotime(w);
    Eigen::MatrixXd pdm_table = process_to_pdm_table(w, ia, ib);
    double dev_tt = 0.0;
    for (int a = 0; a < born.rows(); ++a)
      for (int b = 0; b < born.cols(); ++b)
        dev_tt = std::max(dev_tt,
                          std::abs(born(a, b) - ensemble_prob(ens, ia, ib, a, b)));
    record(res, "born_vs_twotime", dev_tt);
    record(res, "born_vs_pdm_pipeline", max_abs(born - pdm_table));
  }

  // worked example: W = I/4 on four qubit slots with projective instruments
  ProcessMatrix w_mixed = ProcessMatrix::qubit(0.25 * identity(16));
  Instrument proj{{basis_projector_channel(0, 2), basis_projector_channel(1, 2)}};
  Eigen::MatrixXd born = born_table(w_mixed, proj, proj);
  Eigen::MatrixXd pdm_table = process_to_pdm_table(w_mixed, proj, proj);
  double dev_born = (born.array() - 0.25).abs().maxCoeff();
  double dev_pdm = (pdm_table.array() - 0.25).abs().maxCoeff();
  TwoTimeEnsemble ens = process_to_twotime(w_mixed);
  double dev_rec = max_abs(partial_transpose(gram_matrix(ens), w_mixed.space(),
                                             {"A2", "B2"}) -
                           w_mixed.matrix);
  double dev_weights = 0.0;
  for (const auto& m : ens.members)
    dev_weights = std::max(dev_weights, std::abs(m.weight - 1.0 / 16.0));
  record(res, "worked_example_born_uniform", dev_born);
  record(res, "worked_example_pdm_uniform", dev_pdm);
  record(res, "worked_example_recompose", dev_rec);
  record(res, "worked_example_weights", dev_weights);
  return res;
}

std::vector<SuiteResult> verify_suites(const std::string& name, int trials,
                                       std::uint64_t seed) {
  if (name == "pdm-oracle") return {verify_pdm_oracle(trials, seed)};
  if (name == "abl") return {verify_abl(trials, seed)};
  if (name == "pure") return {verify_pure(trials, seed)};
  if (name == "ensemble") return {verify_ensemble(trials, seed)};
  if (name == "bridge") return {verify_bridge(trials, seed)};
  if (name == "all")
    return {verify_pdm_oracle(trials, seed), verify_abl(trials, seed),
            verify_pure(trials, seed), verify_ensemble(trials, seed),
            verify_bridge(trials, seed)};
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace stq
