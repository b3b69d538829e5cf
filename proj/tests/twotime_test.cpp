#include <random>

#include "doctest.h"
#include "stq/process.hpp"
#include "stq/twotime.hpp"

using namespace stq;

namespace {

CVec basis_ket(Index i, Index d) {
  CVec v = CVec::Zero(d);
  v[i] = 1.0;
  return v;
}

// Full-index contraction of the density vectors (Psi (x) Psi^dag) . J_a,
// materializing both rank-4 tensors.
double density_vector_contraction(const CMat& coeff, const CMat& e) {
  const Index d = coeff.rows();
  double acc = 0.0;
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      for (Index m = 0; m < d; ++m)
        for (Index n = 0; n < d; ++n) {
          cxd eta = coeff(i, j) * std::conj(coeff(m, n));
          cxd jterm = e(i, j) * std::conj(e(m, n));
          acc += (eta * jterm).real();
        }
  return acc;
}

}  // namespace

TEST_CASE("bullet contraction") {
  std::mt19937_64 gen(41);

  SUBCASE("product state gives the matrix element") {
    CVec pre = random_ket(3, gen), post = random_ket(3, gen);
    CMat e = randn_complex(gen, 3, 3);
    cxd expected = (post.adjoint() * e * pre).value();
    CHECK(std::abs(bullet(PureTwoTimeState::product(post, pre), e) - expected) < 1e-13);
  }

  SUBCASE("vacuum to vacuum through the identity") {
    PureTwoTimeState s = PureTwoTimeState::product(basis_ket(0, 2), basis_ket(0, 2));
    CHECK(bullet(s, identity(2)) == cxd(1, 0));
  }

  SUBCASE("|bullet|^2 equals the full density-vector contraction") {
    for (int t = 0; t < 10; ++t) {
      CMat coeff = randn_complex(gen, 2, 2);
      CMat e = randn_complex(gen, 2, 2);
      double got = std::norm(bullet(PureTwoTimeState::single(coeff), e));
      CHECK(got == doctest::Approx(density_vector_contraction(coeff, e)).epsilon(1e-12));
    }
  }

  SUBCASE("bipartite index convention") {
    // legs (i in, j out, k in, l out); coefficient at (i,j,k,l) = (0,1,1,0)
    CVec coeff = CVec::Zero(16);
    coeff[0 * 8 + 1 * 4 + 1 * 2 + 0] = 1.0;
    PureTwoTimeState s = PureTwoTimeState::bipartite(coeff, 2, 2, 2, 2);
    CMat ea = randn_complex(gen, 2, 2), eb = randn_complex(gen, 2, 2);
    // contraction is <j|E_A|i> <l|E_B|k> = ea(1,0) * eb(0,1)
    CHECK(std::abs(bullet(s, std::vector<CMat>{ea, eb}) - ea(1, 0) * eb(0, 1)) < 1e-14);
  }

  SUBCASE("dimension mismatch") {
    PureTwoTimeState s = PureTwoTimeState::single(randn_complex(gen, 2, 2));
    CHECK_THROWS_AS(bullet(s, identity(3)), std::invalid_argument);
  }
}

TEST_CASE("kraus density vector contraction is real nonnegative") {
  std::mt19937_64 gen(42);
  Instrument inst = random_instrument(2, 2, 43, 2);
  PureTwoTimeState s = PureTwoTimeState::single(randn_complex(gen, 2, 2));
  KrausDensityVector j0(inst.outcomes[0]);
  double w = j0.contract(s);
  CHECK(w >= -1e-12);
  CHECK(w == doctest::Approx(outcome_weight(s, inst.outcomes[0])));
}

TEST_CASE("ABL rule") {
  CMat p0 = basis_ket(0, 2) * basis_ket(0, 2).adjoint();
  CMat p1 = basis_ket(1, 2) * basis_ket(1, 2).adjoint();
  Instrument zmeas{{single_kraus_channel(p0), single_kraus_channel(p1)}};

  SUBCASE("projective measurement with matching pre and post selection") {
    CHECK(abl_prob(basis_ket(0, 2), basis_ket(0, 2), zmeas, 0) == doctest::Approx(1.0));
    CHECK(abl_prob(basis_ket(0, 2), basis_ket(0, 2), zmeas, 1) == doctest::Approx(0.0));
  }

  SUBCASE("x-basis instrument on |0> post-selected on |+>") {
    CVec plus = (basis_ket(0, 2) + basis_ket(1, 2)) / std::sqrt(2.0);
    CVec minus = (basis_ket(0, 2) - basis_ket(1, 2)) / std::sqrt(2.0);
    Instrument xmeas{{single_kraus_channel(CMat(plus * plus.adjoint())),
                      single_kraus_channel(CMat(minus * minus.adjoint()))}};
    // <+|P_-|0> = 0, so outcome + happens with certainty
    CHECK(abl_prob(basis_ket(0, 2), plus, xmeas, 0) == doctest::Approx(1.0));
  }

  SUBCASE("coarse-grained outcomes match the explicit Kraus sum") {
    std::mt19937_64 gen(44);
    Instrument inst = random_instrument(2, 2, 45, 3);
    CVec pre = random_ket(2, gen), post = random_ket(2, gen);
    std::vector<double> weights;
    double denom = 0.0;
    for (const auto& ch : inst.outcomes) {
      double w = 0.0;
      for (const auto& k : ch.kraus) w += std::norm((post.adjoint() * k * pre).value());
      weights.push_back(w);
      denom += w;
    }
    for (int a = 0; a < 2; ++a)
      CHECK(abl_prob(pre, post, inst, a) == doctest::Approx(weights[a] / denom));
  }

  SUBCASE("impossible post-selection") {
    CHECK_THROWS_AS(abl_prob(basis_ket(0, 2), basis_ket(1, 2), zmeas, 0),
                    std::domain_error);
  }
}

TEST_CASE("pure two-time probabilities") {
  std::mt19937_64 gen(46);
  Instrument inst = random_instrument(2, 3, 47, 2);

  SUBCASE("product states reduce to the ABL rule") {
    CVec pre = random_ket(2, gen), post = random_ket(2, gen);
    PureTwoTimeState s = PureTwoTimeState::product(post, pre);
    for (int a = 0; a < 3; ++a)
      CHECK(pure_prob(s, inst, a) == doctest::Approx(abl_prob(pre, post, inst, a)));
  }

  SUBCASE("probabilities are scale invariant and normalized") {
    CMat coeff = randn_complex(gen, 2, 2);
    PureTwoTimeState s = PureTwoTimeState::single(coeff);
    PureTwoTimeState scaled = PureTwoTimeState::single(CMat(cxd(0.3, -1.7) * coeff));
    double total = 0.0;
    for (int a = 0; a < 3; ++a) {
      double p = pure_prob(s, inst, a);
      total += p;
      CHECK(p == doctest::Approx(pure_prob(scaled, inst, a)));
      CHECK(p >= -1e-12);
      CHECK(p <= 1.0 + 1e-12);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ensemble probabilities") {
  std::mt19937_64 gen(48);
  Instrument inst = random_instrument(2, 2, 49, 2);

  SUBCASE("single member equals the pure rule") {
    PureTwoTimeState s = PureTwoTimeState::single(randn_complex(gen, 2, 2));
    TwoTimeEnsemble ens{{{1.0, s}}};
    for (int a = 0; a < 2; ++a)
      CHECK(ensemble_prob(ens, inst, a) == doctest::Approx(pure_prob(s, inst, a)));
  }

  SUBCASE("member rescaling with compensating weight") {
    CMat c0 = randn_complex(gen, 2, 2), c1 = randn_complex(gen, 2, 2);
    TwoTimeEnsemble ens{{{0.25, PureTwoTimeState::single(c0)},
                         {0.75, PureTwoTimeState::single(c1)}}};
    // scale member 0 by c and divide its weight by |c|^2 (renormalizing both
    // weights by the same factor keeps p_r |c_r|^2 ratios fixed)
    double scale2 = std::norm(cxd(2.0, 1.0));
    double w0 = 0.25 / scale2, w1 = 0.75;
    TwoTimeEnsemble rescaled{
        {{w0 / (w0 + w1), PureTwoTimeState::single(CMat(cxd(2.0, 1.0) * c0))},
         {w1 / (w0 + w1), PureTwoTimeState::single(c1)}}};
    for (int a = 0; a < 2; ++a)
      CHECK(ensemble_prob(ens, inst, a) ==
            doctest::Approx(ensemble_prob(rescaled, inst, a)).epsilon(1e-12));
  }

  SUBCASE("random ensembles are normalized") {
    TwoTimeEnsemble ens{{{0.5, PureTwoTimeState::single(randn_complex(gen, 2, 2))},
                         {0.5, PureTwoTimeState::single(randn_complex(gen, 2, 2))}}};
    double total = 0.0;
    for (int a = 0; a < 2; ++a) total += ensemble_prob(ens, inst, a);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("uniform basis-product ensemble reproduces the maximally mixed process") {
  // the sixteen states 2 <jl| (x) |ik> with uniform weight form the standard
  // solution for W = I/4 on four qubit slots
  TwoTimeEnsemble ens;
  for (Index r = 0; r < 16; ++r) {
    CVec coeff = CVec::Zero(16);
    coeff[r] = 2.0;
    ens.members.push_back({1.0 / 16.0, PureTwoTimeState::bipartite(coeff, 2, 2, 2, 2)});
  }
  CHECK(max_abs(gram_matrix(ens) - 0.25 * identity(16)) < 1e-14);

  Instrument proj{{basis_projector_channel(0, 2), basis_projector_channel(1, 2)}};
  ProcessMatrix w = ProcessMatrix::qubit(0.25 * identity(16));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      CHECK(ensemble_prob(ens, proj, proj, a, b) == doctest::Approx(0.25));
      CHECK(born_rule(w, cj_matrix(proj.outcomes[a]), cj_matrix(proj.outcomes[b])) ==
            doctest::Approx(0.25));
    }
}
