// Acceptance suite: end-to-end checks of the library's headline guarantees,
// one pass/fail line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "stq/json_io.hpp"
#include "stq/qswitch.hpp"
#include "stq/verify.hpp"

using namespace stq;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::function<Outcome()> run;
};

double dev_of(const SuiteResult& r, const std::string& name) {
  for (const auto& [n, d] : r.deviations)
    if (n == name) return d;
  return 1e300;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

// shared corpus of proper PDMs for the monotone and structural criteria
struct PdmCase {
  Pdm pdm;
  std::vector<Channel> chain;
  CMat rho1;
};

std::vector<PdmCase> random_pdm_corpus(int count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<PdmCase> out;
  const int configs[3][2] = {{1, 2}, {1, 3}, {2, 2}};
  for (int t = 0; t < count; ++t) {
    const int n = configs[t % 3][0];
    const int m = configs[t % 3][1];
    const Index d = Index(1) << n;
    PdmCase c;
    c.rho1 = random_density(d, gen);
    std::vector<CjMatrix> cjs;
    for (int k = 0; k + 1 < m; ++k) {
      c.chain.push_back(random_cptp(d, d, 1 + static_cast<int>(gen() % 3), gen()));
      cjs.push_back(cj_matrix(c.chain.back()));
    }
    c.pdm = build_closed_form(c.rho1, cjs);
    out.push_back(std::move(c));
  }
  return out;
}

Outcome criterion_pdm_oracle() {
  auto t0 = std::chrono::steady_clock::now();
  SuiteResult r = verify_pdm_oracle(50, 20240901);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double dev = dev_of(r, "closed_form_vs_tomographic");
  Outcome o;
  o.pass = dev <= 1e-10 && secs < 30.0;
  o.detail = fmt("max entry deviation %.3e (tol 1e-10), %.2f s (limit 30 s)", dev, secs);
  return o;
}

Outcome criterion_marginals() {
  SuiteResult r = verify_pdm_oracle(50, 20240901);
  double dev = dev_of(r, "single_time_marginals");
  return {dev <= 1e-10, fmt("max marginal deviation %.3e (tol 1e-10)", dev)};
}

Outcome criterion_abl() {
  SuiteResult r = verify_abl(100, 20240902);
  double dev = r.max_deviation();
  return {dev <= 1e-10, fmt("max probability deviation %.3e (tol 1e-10)", dev)};
}

Outcome criterion_pure_ensemble() {
  double dp = verify_pure(100, 20240903).max_deviation();
  double de = verify_ensemble(100, 20240904).max_deviation();
  return {dp <= 1e-10 && de <= 1e-10,
          fmt("pure %.3e, ensemble %.3e (tol 1e-10)", dp, de)};
}

Outcome criterion_bridge() {
  SuiteResult r = verify_bridge(50, 20240905);
  double d_tt = dev_of(r, "born_vs_twotime");
  double d_pdm = dev_of(r, "born_vs_pdm_pipeline");
  double d_ex = std::max({dev_of(r, "worked_example_born_uniform"),
                          dev_of(r, "worked_example_weights"),
                          dev_of(r, "worked_example_recompose")});
  double d_ex_pdm = dev_of(r, "worked_example_pdm_uniform");
  bool pass = d_tt <= 1e-9 && d_pdm <= 1e-8 && d_ex <= 1e-9 && d_ex_pdm <= 1e-8;
  return {pass, fmt("born vs two-time %.3e (tol 1e-9), born vs PDM %.3e (tol 1e-8), "
                    "worked example included",
                    d_tt, d_pdm)};
}

Outcome criterion_recomposition() {
  std::mt19937_64 gen(20240906);
  double dev = 0.0;
  for (int t = 0; t < 25; ++t) {
    CMat g = randn_complex(gen, 16, 16);
    CMat gram = g * g.adjoint();
    TwoTimeEnsemble ens = solve_gram(gram, 2, 2, 2, 2);
    dev = std::max(dev, max_abs(gram_matrix(ens) - gram));
  }
  return {dev <= 1e-10, fmt("max recomposition deviation %.3e (tol 1e-10)", dev)};
}

Outcome criterion_switch_scan() {
  auto t0 = std::chrono::steady_clock::now();
  auto rows = negativity_scan(11, 1);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double max_zero = 0.0, min_interior = 1e300;
  for (const auto& r : rows) {
    max_zero = std::max({max_zero, r.f_c1a1a2, r.f_a1c2, r.f_a1a2});
    if (r.p_c == 0.0 || r.p_c == 1.0) max_zero = std::max(max_zero, r.f_a1c2a2);
    bool interior = r.p_a >= 0.1 && r.p_a <= 0.9 && r.p_c >= 0.1 && r.p_c <= 0.9;
    if (interior) min_interior = std::min(min_interior, r.f_a1c2a2);
  }
  bool pass = rows.size() == 121 && max_zero <= 1e-9 && min_interior > 1e-6 && secs < 60.0;
  Outcome o;
  o.pass = pass;
  o.detail = fmt("expected-zero max %.3e (tol 1e-9), interior min %.3e (> 1e-6), ",
                 max_zero, min_interior) +
             fmt("%.2f s (limit 60 s)", secs);
  return o;
}

Outcome criterion_monotone() {
  auto corpus = random_pdm_corpus(200, 20240907);
  std::mt19937_64 gen(20240908);
  double min_f = 1e300, dev_lu = 0.0, dev_convex = 0.0;
  for (const auto& c : corpus) min_f = std::min(min_f, negativity(c.pdm));

  for (int t = 0; t < 50; ++t) {
    const Pdm& r = corpus[t].pdm;
    std::vector<CMat> locals;
    for (const auto& slot : r.space.slots) locals.push_back(haar_unitary(slot.dim, gen));
    CMat u = kron_all(locals);
    Pdm rotated{u * r.matrix * u.adjoint(), r.space, r.normalized};
    dev_lu = std::max(dev_lu, std::abs(negativity(rotated) - negativity(r)));
  }

  // convex mixtures within one slot geometry
  for (int t = 0; t + 3 < 60; t += 3) {
    const Pdm& a = corpus[t].pdm;
    const Pdm& b = corpus[t + 3].pdm;  // same (n, m) configuration
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double p = unif(gen);
    Pdm mix{p * a.matrix + (1 - p) * b.matrix, a.space, true};
    double excess = negativity(mix) - (p * negativity(a) + (1 - p) * negativity(b));
    dev_convex = std::max(dev_convex, excess);
  }
  bool pass = min_f >= -1e-12 && dev_lu <= 1e-10 && dev_convex <= 1e-10;
  return {pass, fmt("min f %.3e (>= -1e-12), local-unitary dev %.3e, ", min_f, dev_lu) +
                    fmt("convexity excess %.3e (tol 1e-10)", dev_convex)};
}

Outcome criterion_structural() {
  auto corpus = random_pdm_corpus(60, 20240909);
  double herm = 0.0, trace_dev = 0.0;
  for (const auto& c : corpus) {
    herm = std::max(herm, max_abs(c.pdm.matrix - c.pdm.matrix.adjoint()));
    trace_dev = std::max(trace_dev, std::abs(c.pdm.trace() - 1.0));
  }
  Pdm sw = switch_pdm({0.3, 0.7});
  herm = std::max(herm, max_abs(sw.matrix - sw.matrix.adjoint()));
  trace_dev = std::max(trace_dev, std::abs(sw.trace() - 1.0));

  double cj_dev = 0.0;
  std::mt19937_64 gen(20240910);
  for (int t = 0; t < 20; ++t) {
    Index d = 2 + static_cast<Index>(t % 2);
    CjMatrix cj = cj_matrix(random_cptp(d, d, 1 + static_cast<int>(gen() % 3), gen()));
    cj_dev = std::max(cj_dev, max_abs(partial_trace(cj.matrix, cj.space(), {"in"}) -
                                      identity(d)));
  }

  CMat swap4 = CMat::Zero(4, 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) swap4(2 * i + j, 2 * j + i) = 1.0;
  double swap_dev = max_abs(cj_matrix(identity_channel(2)).matrix - swap4);

  bool pass = herm <= 1e-12 && trace_dev <= 1e-12 && cj_dev <= 1e-10 && swap_dev <= 1e-15;
  return {pass, fmt("hermiticity %.3e, trace %.3e (tol 1e-12), ", herm, trace_dev) +
                    fmt("CJ marginal %.3e (tol 1e-10), cj(id)=swap %.3e (tol 1e-15)",
                        cj_dev, swap_dev)};
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {"PDM closed form matches the tomographic oracle", criterion_pdm_oracle},
      {"single-time marginals recover the propagated state", criterion_marginals},
      {"three-time conditional statistics equal the ABL rule", criterion_abl},
      {"pure and ensemble realizations match the two-time rules", criterion_pure_ensemble},
      {"process bridge preserves statistics (two-time and PDM routes)", criterion_bridge},
      {"gram recomposition is exact on random PSD tensors", criterion_recomposition},
      {"switch negativity scan reproduces the activation pattern", criterion_switch_scan},
      {"negativity satisfies the monotone axioms", criterion_monotone},
      {"structural checks: hermiticity, traces, CJ conventions", criterion_structural},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o = criteria[k].run();
    if (!o.pass) ++failures;
    std::printf("%s  %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  if (failures == 0)
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
