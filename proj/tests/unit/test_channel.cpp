#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sdpi/channel.hpp"
#include "sdpi/error.hpp"
#include "sdpi/random.hpp"
#include "sdpi/spectral.hpp"

using namespace sdpi;

TEST(Pmf, NormalizesWithinDriftAndRejectsBadMasses) {
  const Pmf p({0.2, 0.3, 0.5 + 1e-9});
  EXPECT_NEAR(p.masses().sum(), 1.0, 1e-15);
  EXPECT_THROW(Pmf({0.5, 0.6}), InputError);
  EXPECT_THROW(Pmf({1.2, -0.2}), InputError);
  EXPECT_THROW(Pmf(std::vector<double>{}), InputError);
  EXPECT_TRUE(Pmf({0.5, 0.5}).interior());
  EXPECT_FALSE(Pmf({1.0, 0.0}).interior());
}

TEST(Channel, RejectsNonStochasticColumns) {
  Matrix w(2, 2);
  w << 0.9, 0.2, 0.2, 0.8;
  EXPECT_THROW(Channel{w}, InputError);
  w << 0.9, -0.1, 0.1, 1.1;
  EXPECT_THROW(Channel{w}, InputError);
}

TEST(PushForward, Examples) {
  const Pmf u = push_forward(Channel::bsc(0.1), Pmf::uniform(2));
  EXPECT_NEAR(u[0], 0.5, 1e-15);
  EXPECT_NEAR(u[1], 0.5, 1e-15);
  const Pmf p({0.1, 0.2, 0.7});
  const Pmf same = push_forward(Channel::identity(3), p);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(same[i], p[i]);
  const Pmf b = push_forward(Channel::bsc(0.2), Pmf({1.0, 0.0}));
  EXPECT_NEAR(b[0], 0.8, 1e-15);
  EXPECT_NEAR(b[1], 0.2, 1e-15);
  EXPECT_THROW(push_forward(Channel::bsc(0.2), p), InputError);
}

TEST(Dtm, MatchesEntrywiseOracleAndMapsSqrtInput) {
  Rng rng(3, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const JointSpec s = random_interior_spec(rng, 3, 4);
    const Matrix b = dtm(s);
    const Matrix o = oracle::dtm(s.input().masses(), s.channel().matrix());
    EXPECT_LE((b - o).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((b * s.input().sqrt_masses() - s.output().sqrt_masses()).norm(), 1e-10);
  }
}

TEST(Dtm, IdentityAndRankOne) {
  const Pmf p({0.2, 0.3, 0.5});
  EXPECT_LE((dtm(p, Channel::identity(3)) - Matrix::Identity(3, 3)).norm(), 1e-15);
  const Matrix b = dtm(p, Channel::constant(Pmf({0.6, 0.4}), 3));
  const Eigen::VectorXd s = oracle::singular_values(b);
  EXPECT_NEAR(s[1], 0.0, 1e-12);
}

TEST(Dtm, BscUniformSingularValues) {
  for (double p : {0.05, 0.2, 0.35}) {
    const Eigen::VectorXd s = oracle::singular_values(dtm(make_bsc(p)));
    EXPECT_NEAR(s[0], 1.0, 1e-12);
    EXPECT_NEAR(s[1], std::abs(1 - 2 * p), 1e-12);
  }
}

TEST(Dtm, ZeroMassLettersGiveZeroEntries) {
  Matrix w(3, 3);
  w << 0.5, 0.0, 0.2, 0.5, 0.0, 0.3, 0.0, 1.0, 0.5;
  const Matrix b = dtm(Pmf({0.5, 0.0, 0.5}), Channel(w));
  EXPECT_EQ(b.col(1).cwiseAbs().sum(), 0.0);
}

TEST(Tensor, ProductOfBsc) {
  const JointSpec t = tensor(make_bsc(0.1), make_bsc(0.1));
  EXPECT_EQ(t.channel().inputs(), 4u);
  EXPECT_EQ(t.channel().outputs(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(t.input()[i], 0.25, 1e-15);
  EXPECT_NEAR(t.channel().matrix()(0, 0), 0.81, 1e-15);
  EXPECT_NEAR(t.channel().matrix()(3, 0), 0.01, 1e-15);
}

TEST(Tensor, DtmCommutesWithKronecker) {
  Rng rng(4, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const JointSpec a = random_interior_spec(rng, 2, 3);
    const JointSpec b = random_interior_spec(rng, 3, 2);
    const Matrix lhs = dtm(tensor(a, b));
    // independent Kronecker product written out by index
    const Matrix da = dtm(a);
    const Matrix db = dtm(b);
    Matrix rhs(da.rows() * db.rows(), da.cols() * db.cols());
    for (Eigen::Index i = 0; i < da.rows(); ++i)
      for (Eigen::Index j = 0; j < da.cols(); ++j)
        for (Eigen::Index k = 0; k < db.rows(); ++k)
          for (Eigen::Index l = 0; l < db.cols(); ++l) rhs(i * db.rows() + k, j * db.cols() + l) = da(i, j) * db(k, l);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Tensor, CapRefusesLargeProducts) {
  EXPECT_THROW(tensor_power(make_bsc(0.1), 13), InputError);
  EXPECT_NO_THROW(tensor_power(make_bsc(0.1), 12));
  EXPECT_THROW(tensor(make_bsc(0.1), make_bsc(0.1), 3), InputError);
}

TEST(Builtins, ParameterRanges) {
  EXPECT_THROW(make_bsc(-0.1), InputError);
  EXPECT_THROW(make_bsc(0.1, 1.5), InputError);
  EXPECT_THROW(make_bec(1.1, 0.5), InputError);
  EXPECT_THROW(make_dsbs(2.0), InputError);
  const JointSpec e = make_bec(0.3, 0.4);
  EXPECT_EQ(e.channel().outputs(), 3u);
  EXPECT_NEAR(e.output()[1], 0.3, 1e-15);
  EXPECT_NEAR(e.output()[2], 0.7 * 0.4, 1e-15);
}

TEST(Builtins, EtaChi2Examples) {
  EXPECT_NEAR(analyze(make_dsbs(0.1)).eta_chi2, 0.64, 1e-12);
  EXPECT_NEAR(analyze(make_bec(0.3, 0.5)).eta_chi2, 0.7, 1e-12);
  EXPECT_NEAR(analyze(make_bsc(0.5)).eta_chi2, 0.0, 1e-15);
}

TEST(Perturb, Examples) {
  Vector k(2);
  k << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  const Pmf r = perturb(Pmf::uniform(2), k, 0.1);
  EXPECT_NEAR(r[0], 0.55, 1e-15);
  EXPECT_NEAR(r[1], 0.45, 1e-15);
  const Pmf same = perturb(Pmf({0.3, 0.7}), Vector::Zero(2), 0.0);
  EXPECT_EQ(same[0], 0.3);
  EXPECT_NO_THROW(perturb(Pmf::uniform(2), k, 1.0));  // lands exactly on (1, 0)
  EXPECT_THROW(perturb(Pmf::uniform(2), k, 1.5), InputError);
  Vector bad(2);
  bad << 1.0, 0.0;
  EXPECT_THROW(perturb(Pmf::uniform(2), bad, 0.01), InputError);
}

TEST(Perturb, RoundTripAndInvariants) {
  Rng rng(5, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Pmf p = random_interior_pmf(rng, 4);
    Vector k = rng.gaussian_vector(4);
    const Vector s = p.sqrt_masses();
    k -= s * s.dot(k);
    k.normalize();
    const double eps = 0.5 * max_perturbation_scale(p, k);
    const Pmf r = perturb(p, k, eps);
    const Perturbation d = Perturbation::between(p, r);
    EXPECT_LE((d.spherical - eps * k).norm(), 1e-12);
    EXPECT_NEAR(d.epsilon, eps, 1e-12);
    EXPECT_NEAR(d.additive.sum(), 0.0, 1e-12);
    EXPECT_LE((d.additive - s.asDiagonal() * d.spherical).norm(), 1e-12);
  }
}

TEST(Perturb, PushForwardMapsSphericalPerturbationsThroughDtm) {
  Rng rng(6, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const JointSpec spec = random_interior_spec(rng, 3, 3);
    const Pmf& p = spec.input();
    Vector k = rng.gaussian_vector(3);
    k -= p.sqrt_masses() * p.sqrt_masses().dot(k);
    k.normalize();
    const double eps = 0.3 * max_perturbation_scale(p, k);
    const Pmf r = perturb(p, k, eps);
    const Vector lhs = push_forward(spec.channel(), r).masses();
    const Vector rhs =
        spec.output().masses() + eps * spec.output().sqrt_masses().asDiagonal() * (dtm(spec) * k);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SupportRestriction, DropsZeroMassLetters) {
  Matrix w(3, 3);
  w << 0.5, 0.0, 0.2, 0.5, 0.0, 0.3, 0.0, 1.0, 0.5;
  const SupportRestriction r = restrict_to_support(JointSpec(Pmf({0.5, 0.0, 0.5}), Channel(w)));
  EXPECT_EQ(r.input_letters, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(r.output_letters, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(r.channel.cols(), 2);
}
