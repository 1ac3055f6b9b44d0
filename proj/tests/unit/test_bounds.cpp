#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sdpi/bounds.hpp"
#include "sdpi/channel.hpp"
#include "sdpi/error.hpp"
#include "sdpi/random.hpp"

using namespace sdpi;

namespace {

// max over subsets A of min(P(A), 1 - P(A)), all 2^n subsets
double brute_balance(const Pmf& p) {
  const std::size_t n = p.size();
  double best = 0.0;
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1ul) a += p[i];
    best = std::max(best, std::min(a, 1.0 - a));
  }
  return best;
}

CertifyOptions quick() {
  CertifyOptions o;
  o.optimizer.restarts = 16;
  return o;
}

}  // namespace

TEST(Phi, Examples) {
  EXPECT_EQ(phi(0.5), 2.0);
  EXPECT_NEAR(phi(0.25), 2 * std::log(3.0), 1e-14);
  EXPECT_GE(phi(0.5 - 1e-6), 2.0);
  EXPECT_LE(phi(0.5 - 1e-6), 2.0 + 1e-4);
  EXPECT_TRUE(std::isinf(phi(0.0)));
  EXPECT_THROW(phi(0.6), InputError);
  EXPECT_THROW(phi(-0.1), InputError);
}

TEST(Phi, DecreasingAndAtLeastTwo) {
  double prev = phi(1e-9);
  for (int i = 1; i <= 100000; ++i) {
    const double p = 1e-9 + (0.5 - 1e-9) * i / 100000.0;
    const double v = phi(p);
    const double direct = p < 0.5 ? std::log((1 - p) / p) / (1 - 2 * p) : 2.0;
    EXPECT_NEAR(v, direct, 1e-9 * direct);
    EXPECT_GE(v, 2.0);
    if (p < 0.5) EXPECT_GT(v, 2.0);
    EXPECT_LE(v, prev + 1e-12);
    prev = v;
  }
}

TEST(Balance, Examples) {
  EXPECT_EQ(balance_coefficient(Pmf({0.5, 0.5})), 0.5);
  EXPECT_NEAR(balance_coefficient(Pmf({0.2, 0.3, 0.5})), 0.5, 1e-15);
  EXPECT_NEAR(balance_coefficient(Pmf({0.1, 0.2, 0.7})), 0.3, 1e-15);
}

TEST(Balance, MatchesBruteForceAndDpBand) {
  Rng rng(41, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const Pmf p = random_interior_pmf(rng, 2 + trial % 11);
    const double ref = brute_balance(p);
    const double exact = balance_coefficient(p);
    EXPECT_NEAR(exact, ref, 1e-15);
    EXPECT_GE(exact, p.min_mass() - 1e-15);
    EXPECT_LE(exact, 0.5);
    const Balance dp = balance(p, BalanceMode::dp);
    EXPECT_GE(dp.value, ref - 1e-15);
    EXPECT_LE(dp.value, ref + dp.error_band + 1e-15);
    EXPECT_FALSE(dp.exact);
  }
}

TEST(Balance, CapPointsToDpMode) {
  const Pmf p = Pmf::uniform(21);
  try {
    balance(p);
    FAIL() << "expected refusal";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("--balance-dp"), std::string::npos);
  }
  const Balance dp = balance(p, BalanceMode::dp);
  EXPECT_NEAR(dp.value, 10.0 / 21.0, dp.error_band + 1e-15);
}

TEST(Bounds, KlExamples) {
  EXPECT_NEAR(thm2_bound(make_dsbs(0.1)), 1.28, 1e-12);
  for (double a : {0.05, 0.2, 0.4}) EXPECT_NEAR(thm3_bound(make_dsbs(a)), thm2_bound(make_dsbs(a)), 1e-15);
  EXPECT_NEAR(thm2_bound(make_dsbs(0.4)), 0.08, 1e-12);
  EXPECT_THROW(thm2_bound(JointSpec(Pmf({1.0, 0.0}), Channel::bsc(0.1))), InputError);
}

TEST(Bounds, BalancedBoundNeverAboveMinMassBound) {
  Rng rng(42, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const JointSpec s = random_interior_spec(rng, 2 + trial % 5, 3);
    EXPECT_LE(thm3_bound(s), thm2_bound(s) + 1e-12);
    const double eta = oracle::eta_chi2(s.input().masses(), s.channel().matrix());
    EXPECT_NEAR(thm2_bound(s), eta / s.input().min_mass(), 1e-12 * std::max(1.0, thm2_bound(s)));
  }
}

TEST(Bounds, GeneralBoundForKlEqualsMinMassBound) {
  Rng rng(43, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const JointSpec s = random_interior_spec(rng, 3, 3);
    const double t2 = thm2_bound(s);
    EXPECT_NEAR(thm4_bound(make_kl(), s), t2, 1e-15 * std::max(1.0, t2));
  }
}

TEST(Bounds, TsallisConstants) {
  for (double a : {0.5, 1.5, 2.0}) {
    for (double ps : {0.1, 0.3, 0.5}) {
      const FGenerator f = make_tsallis(a);
      EXPECT_NEAR(thm4_constant(f, ps), 1.0 / (a * ps), 1e-12);
      EXPECT_NEAR(eq33_constant(f, ps), 2 * std::pow(ps, a - 2) / a, 1e-12);
      const bool thm4_tighter = std::pow(ps, a - 1) >= 0.5;
      EXPECT_EQ(thm4_constant(f, ps) <= eq33_constant(f, ps) * (1 + 1e-15), thm4_tighter) << a << " " << ps;
    }
  }
  const FGenerator near_kl = make_tsallis(1.0 + 1e-9);
  for (double ps : {0.1, 0.3, 0.5}) {
    EXPECT_NEAR(thm4_constant(near_kl, ps), thm4_constant(make_kl(), ps), 1e-6 * thm4_constant(make_kl(), ps));
    EXPECT_NEAR(eq33_constant(near_kl, ps), eq33_constant(make_kl(), ps), 1e-6 * eq33_constant(make_kl(), ps));
  }
}

TEST(Bounds, CombinedIsMinimum) {
  const JointSpec s = make_bsc(0.2, 0.3);
  for (double a : {0.5, 1.5}) {
    const FGenerator f = make_tsallis(a);
    EXPECT_EQ(combined_bound(f, s), std::min(thm4_bound(f, s), eq33_bound(f, s)));
  }
  EXPECT_THROW(thm4_bound(make_tv(), s), MissingDerivative);
}

TEST(Certify, Examples) {
  const BoundReport k = certify(make_kl(), make_dsbs(0.25), quick());
  EXPECT_NEAR(k.eta_chi2, 0.25, 1e-12);
  EXPECT_NEAR(k.eta_f_estimate, 0.25, 1e-6);
  EXPECT_NEAR(k.thm2, 0.5, 1e-12);
  EXPECT_TRUE(k.all_pass());
  const BoundReport c = certify(make_chi2(), make_bec(0.3, 0.3), quick());
  EXPECT_NEAR(c.eta_f_estimate, c.eta_chi2, 1e-6);
  EXPECT_TRUE(c.all_pass());
  EXPECT_THROW(certify(make_tv(), make_dsbs(0.1), quick()), MissingDerivative);
  EXPECT_THROW(certify(make_kl(), JointSpec(Pmf({1.0, 0.0}), Channel::bsc(0.1)), quick()), InputError);
}

TEST(Certify, RandomSpecsSandwich) {
  Rng rng(44, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const JointSpec s = random_interior_spec(rng, 3, 3);
    CertifyOptions o = quick();
    o.optimizer.seed = trial;
    const BoundReport r = certify(make_kl(), s, o);
    EXPECT_TRUE(r.all_pass());
    EXPECT_LE(r.eta_chi2, r.eta_f_estimate + 1e-6);
    EXPECT_LE(r.eta_f_estimate, r.thm3 + 1e-9);
    EXPECT_LE(r.thm3, r.thm2 + 1e-9);
    EXPECT_LE(r.p_star, r.balance);
    EXPECT_EQ(r.thm2_clipped, std::min(1.0, r.thm2));
  }
}

TEST(Certify, UncertifiedBoundsStillReported) {
  // chi2 fails the Pinsker-type condition on the grid, so its bound is not certified
  const BoundReport r = certify(make_chi2(), make_bsc(0.1, 0.3), quick());
  ASSERT_TRUE(r.thm4.has_value());
  EXPECT_EQ(r.thm4_certified, r.conditions.thm4_certified());
  for (const Verdict& v : r.verdicts) {
    if (!r.thm4_certified) EXPECT_NE(v.name, "eta_f_estimate <= thm4");
  }
}

TEST(TensorizedCertify, DsbsLooseness) {
  const BoundReport two = tensorized_certify(make_kl(), make_dsbs(0.1), 2, quick());
  ASSERT_TRUE(two.tensor.has_value());
  EXPECT_NEAR(two.tensor->product_eta_chi2, 0.64, 1e-9);
  EXPECT_NEAR(two.tensor->naive_constant, 4.0, 1e-12);
  EXPECT_NEAR(two.tensor->corollary_constant, 2.0, 1e-12);
  EXPECT_TRUE(two.all_pass());
  const BoundReport three = tensorized_certify(make_kl(), make_dsbs(0.1), 3, quick());
  EXPECT_NEAR(three.tensor->naive_constant, 8.0, 1e-12);
  EXPECT_NEAR(three.tensor->corollary_bound, two.tensor->corollary_bound, 1e-9);
  const BoundReport one = tensorized_certify(make_kl(), make_dsbs(0.1), 1, quick());
  const BoundReport plain = certify(make_kl(), make_dsbs(0.1), quick());
  EXPECT_EQ(one.eta_f_estimate, plain.eta_f_estimate);
  EXPECT_EQ(one.thm2, plain.thm2);
  EXPECT_THROW(tensorized_certify(make_kl(), make_dsbs(0.1), 0, quick()), InputError);
}

TEST(AssessConditions, Builtins) {
  const FConditions kl = assess_conditions(make_kl());
  EXPECT_TRUE(kl.thm4_certified());
  EXPECT_TRUE(kl.eq33_certified());
  for (double a : {0.5, 1.5, 2.0}) EXPECT_TRUE(assess_conditions(make_tsallis(a)).thm4_certified()) << a;
}
