#include <doctest.h>

#include <cmath>
#include <random>

#include "fsmix/posterior.hpp"
#include "fsmix/verification.hpp"

#include <Eigen/Eigenvalues>

using namespace fsmix;

namespace {

Vector random_vec(int d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n01;
  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = scale * n01(rng);
  return v;
}

double min_eig(const Matrix& m) { return Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().minCoeff(); }

// Root of w - x * sigmoid(-w x) = 0 by bisection.
double bisect_mode(double x) {
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid - x * sigmoid(-mid * x) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("quadratic update, one-dimensional recursion") {
  // Prior variance B^2 * 1, label 2 inside [-B, B] with B = 2.
  const double B = 2.0;
  QuadraticPosterior p(Matrix::Constant(1, 1, 1.0 / (B * B)), Vector::Zero(1), 1);
  p = quad_update(p, {Vector::Ones(1), 2.0}, B);
  CHECK(p.mean()[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.cov()(0, 0) / (B * B) == doctest::Approx(0.5).epsilon(1e-15));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double Bk = 0.5 + std::abs(u(rng)) * 2.0, s2 = 0.1 + std::abs(u(rng)), w = u(rng), y = Bk * u(rng);
    QuadraticPosterior q(Matrix::Constant(1, 1, 1.0 / (Bk * Bk * s2)), Vector::Constant(1, w / (Bk * Bk * s2)), 1);
    q = quad_update(q, {Vector::Ones(1), y}, Bk);
    CHECK(q.mean()[0] == doctest::Approx((w + s2 * y) / (1 + s2)).epsilon(1e-13));
    CHECK(q.cov()(0, 0) / (Bk * Bk) == doctest::Approx(s2 / (s2 + 1)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(quad_update(p, {Vector::Ones(1), 2.5}, B), LabelRangeError);
}

TEST_CASE("zero feature leaves the posterior unchanged") {
  const QuadraticPosterior p = QuadraticPosterior::anchor(Vector::Ones(2), 1);
  const QuadraticPosterior q = quad_update(p, {Vector::Zero(2), 0.7}, 1.0);
  CHECK(q.precision() == p.precision());
  CHECK(q.shift() == p.shift());
}

TEST_CASE("two-dimensional update matches prior times likelihood on a grid") {
  std::mt19937_64 rng(8);
  const QuadraticPosterior prior = QuadraticPosterior::anchor(Vector::Zero(2), 1);
  const DataPoint pt{random_vec(2, rng), 0.6};
  const QuadraticPosterior post = quad_update(prior, pt, 1.0);
  const GaussianDist pd = prior.distribution(), qd = post.distribution();
  auto unnorm = [&](const Vector& w) {
    const double r = w.dot(pt.x) - pt.y;
    return std::exp(pd.log_density(w) - r * r / 2.0);
  };
  const int n = 801;
  const double lo = -8.0, h = 16.0 / (n - 1);
  double z = 0.0;
  Vector w(2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      w << lo + i * h, lo + j * h;
      z += unnorm(w) * h * h;
    }
  for (int k = 0; k < 100; ++k) {
    const Vector at = random_vec(2, rng);
    CHECK(std::exp(qd.log_density(at)) == doctest::Approx(unnorm(at) / z).epsilon(1e-6));
  }
}

TEST_CASE("variance recursion telescopes") {
  CHECK(quad_variance_recursion_check(1.0, 2) == 0.5);
  CHECK(quad_variance_recursion_check(1.0, 11) == doctest::Approx(1.0 / 11.0).epsilon(1e-15));
  for (int t : {1, 2, 50}) CHECK(quad_variance_recursion_check(0.0, t) == 0.0);
  CHECK_THROWS_AS(quad_variance_recursion_check(1.0, 0), ArgumentError);
}

TEST_CASE("quadratic mix factor") {
  QuadraticPosterior sharp(Matrix::Constant(1, 1, 1e14), Vector::Constant(1, 0.3e14), 1);
  CHECK(quad_mix_factor(sharp, {Vector::Ones(1), 0.3}, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  const double B = 1.3, w = -0.2, s2 = 0.8, y = 0.9;
  QuadraticPosterior p(Matrix::Constant(1, 1, 1.0 / (B * B * s2)), Vector::Constant(1, w / (B * B * s2)), 1);
  CHECK(quad_mix_factor(p, {Vector::Ones(1), y}, B) ==
        doctest::Approx(std::exp(-(w - y) * (w - y) / (2 * B * B * (1 + s2))) / std::sqrt(1 + s2)).epsilon(1e-14));

  std::mt19937_64 rng(9);
  QuadraticPosterior q = QuadraticPosterior::anchor(Vector::Zero(3), 1);
  for (int t = 0; t < 5; ++t) q.absorb(random_vec(3, rng), 0.5 * std::tanh(random_vec(1, rng)[0]), 1.0);
  const DataPoint pt{random_vec(3, rng), -0.4};
  const GaussianDist g = q.distribution();
  const auto est = mc_expectation([&](std::mt19937_64& r) { return g.sample(r); },
                                  [&](const Vector& v) {
                                    const double r = v.dot(pt.x) - pt.y;
                                    return std::exp(-r * r / 2.0);
                                  },
                                  1000000, 10);
  CHECK(std::abs(est.estimate - quad_mix_factor(q, pt, 1.0)) <= 3.0 * est.standard_error);

  for (int k = 0; k < 200; ++k) {
    const double f = quad_mix_factor(q, {random_vec(3, rng), std::tanh(random_vec(1, rng)[0])}, 1.0);
    CHECK(f > 0.0);
    CHECK(f <= 1.0);
  }
}

TEST_CASE("updates commute in the sufficient statistics") {
  const DataPoint a{Vector::Constant(2, 0.5), 0.25}, b{Vector::Constant(2, -0.75), 0.5};
  QuadraticPosterior p1 = QuadraticPosterior::anchor(Vector::Zero(2), 1), p2 = p1;
  p1 = quad_update(quad_update(p1, a, 1.0), b, 1.0);
  p2 = quad_update(quad_update(p2, b, 1.0), a, 1.0);
  CHECK(p1.precision() == p2.precision());
  CHECK(p1.shift() == p2.shift());

  std::mt19937_64 rng(12);
  for (int k = 0; k < 50; ++k) {
    const DataPoint c{random_vec(3, rng), 0.3}, d{random_vec(3, rng), -0.6};
    QuadraticPosterior q1 = QuadraticPosterior::anchor(Vector::Zero(3), 1), q2 = q1;
    q1 = quad_update(quad_update(q1, c, 1.0), d, 1.0);
    q2 = quad_update(quad_update(q2, d, 1.0), c, 1.0);
    CHECK((q1.precision() - q2.precision()).norm() <= 1e-14 * q1.precision().norm());
    CHECK((q1.shift() - q2.shift()).norm() <= 1e-14 * (1.0 + q1.shift().norm()));
  }
}

TEST_CASE("posterior mean moves monotonically toward a repeated label") {
  QuadraticPosterior p = QuadraticPosterior::anchor(Vector::Zero(1), 1);
  double prev = p.mean()[0];
  for (int t = 0; t < 100; ++t) {
    p.absorb(Vector::Ones(1), 0.8, 1.0);
    CHECK(p.mean()[0] > prev);
    CHECK(p.mean()[0] < 0.8);
    prev = p.mean()[0];
  }
}

TEST_CASE("precision stays above the identity with bounded trace") {
  std::mt19937_64 rng(13);
  QuadraticPosterior p = QuadraticPosterior::anchor(Vector::Zero(4), 1);
  for (int t = 1; t <= 300; ++t) {
    Vector x = random_vec(4, rng);
    x /= x.norm();
    p.absorb(x, 0.5, 1.0);
    CHECK(min_eig(p.precision()) >= 1.0 - 1e-12);
    CHECK(p.precision().trace() <= 4.0 + t + 1e-9);
  }
  CHECK((p.mean() - p.precision().llt().solve(p.shift())).norm() <= 1e-12);
}

TEST_CASE("Laplace posterior refits") {
  SUBCASE("uninformative feature keeps the mode") {
    LaplacePosterior p = LaplacePosterior::anchor(Vector::Constant(2, 0.3), 1.0, 1);
    p.absorb({Vector::Zero(2), 1.0});
    CHECK(p.mode() == Vector::Constant(2, 0.3));
  }
  SUBCASE("single observation") {
    LaplacePosterior p = LaplacePosterior::anchor(Vector::Zero(1), 1.0, 1);
    p = laplace_update(p, {Vector::Ones(1), 1.0}, 1.0);
    CHECK(p.mode()[0] == doctest::Approx(bisect_mode(1.0)).epsilon(1e-10));
    CHECK(p.mode()[0] == doctest::Approx(0.401058137541547035651).epsilon(1e-10));
    CHECK(p.hessian()(0, 0) == doctest::Approx(1.24021050785325257593).epsilon(1e-9));
    CHECK(p.losses_seen().size() == 1);
  }
  SUBCASE("opposite labels cancel at a centered prior") {
    LaplacePosterior p = LaplacePosterior::anchor(Vector::Zero(1), 1.0, 1);
    p.absorb({Vector::Constant(1, 1.7), 1.0});
    p.absorb({Vector::Constant(1, 1.7), -1.0});
    CHECK(std::abs(p.mode()[0]) <= 1e-12);
  }
  SUBCASE("stationary mode and dominant Hessian") {
    std::mt19937_64 rng(14);
    LaplacePosterior p = LaplacePosterior::anchor(Vector::Zero(3), 1.0, 1);
    for (int t = 0; t < 60; ++t) {
      p.absorb({random_vec(3, rng), t % 3 == 0 ? -1.0 : 1.0});
      CHECK(p.gradient(p.mode()).norm() <= 1e-8);
      CHECK(min_eig(p.hessian()) >= 1.0 - 1e-12);
    }
  }
  SUBCASE("Newton failure is reported and leaves the state intact") {
    LaplacePosterior p = LaplacePosterior::anchor(Vector::Zero(1), 1.0, 1);
    CHECK_THROWS_AS(p.absorb({Vector::Ones(1), 1.0}, NewtonOptions{1e-8, 0, 40}), NumericalError);
    CHECK(p.losses_seen().empty());
    CHECK(p.mode()[0] == 0.0);
  }
  SUBCASE("errors") {
    LaplacePosterior p = LaplacePosterior::anchor(Vector::Zero(2), 1.0, 1);
    CHECK_THROWS_AS(p.absorb({Vector::Zero(2), 0.0}), LabelRangeError);
    CHECK_THROWS_AS(p.absorb({Vector::Zero(3), 1.0}), DimensionError);
    CHECK_THROWS_AS(laplace_update(p, {Vector::Zero(2), 1.0}, 0.5), ArgumentError);
  }
}

TEST_CASE("Laplace mix factor") {
  const LaplacePosterior p0 = LaplacePosterior::anchor(Vector::Zero(2), 0.7, 1);
  CHECK(laplace_mix_factor(p0, {Vector::Zero(2), 1.0}, 0.7) == doctest::Approx(std::exp(-0.7 * std::log(2.0))));

  // Reference value for E[sigmoid(w)] under N(mode, 1/hessian) after one observation.
  LaplacePosterior p1 = LaplacePosterior::anchor(Vector::Zero(1), 1.0, 1);
  p1.absorb({Vector::Ones(1), 1.0});
  CHECK(laplace_mix_factor(p1, {Vector::Ones(1), 1.0}, 1.0) ==
        doctest::Approx(0.584681546227378167104).epsilon(1e-10));

  std::mt19937_64 rng(15);
  LaplacePosterior p = LaplacePosterior::anchor(Vector::Zero(2), 1.0, 1);
  for (int t = 0; t < 8; ++t) p.absorb({random_vec(2, rng), t % 2 ? 1.0 : -1.0});
  const DataPoint pt{random_vec(2, rng), 1.0};
  const GaussianDist g = p.distribution();
  const auto est = mc_expectation([&](std::mt19937_64& r) { return g.sample(r); },
                                  [&](const Vector& w) { return std::exp(-logistic_loss(w.dot(pt.x))); }, 1000000, 16);
  CHECK(std::abs(est.estimate - laplace_mix_factor(p, pt, 1.0)) <= 2e-3);
  for (int k = 0; k < 100; ++k) {
    const double f = laplace_mix_factor(p, {random_vec(2, rng, 3.0), k % 2 ? 1.0 : -1.0}, 1.0);
    CHECK(f > 0.0);
    CHECK(f <= 1.0);
  }
}
