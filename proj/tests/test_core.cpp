#include <doctest.h>

#include <cmath>
#include <random>

#include "fsmix/core.hpp"

using namespace fsmix;

namespace {
Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}
}  // namespace

TEST_CASE("loss spec defaults") {
  CHECK(LossSpec::squared_1d(2.0).eta == doctest::Approx(1.0 / 8.0));
  CHECK(LossSpec::least_squares(1.0).eta == 0.5);
  CHECK(LossSpec::logistic().eta == 1.0);
  CHECK(LossSpec::squared_1d(1.0, 0.1).eta == 0.1);
  CHECK_THROWS_AS(LossSpec::squared_1d(0.0), ArgumentError);
  CHECK_THROWS_AS(LossSpec::generic_exp_concave(1.0, -1.0), ArgumentError);
  CHECK_THROWS_AS(LossSpec::logistic(0.0), ArgumentError);
}

TEST_CASE("loss evaluation") {
  const auto sq = LossSpec::squared_1d(1.0);
  CHECK(loss_eval(sq, 0.0, {Vector::Ones(1), 1.0}) == 1.0);
  CHECK(loss_eval(LossSpec::logistic(), 0.0, {Vector::Ones(1), 1.0}) == doctest::Approx(std::log(2.0)));
  CHECK(loss_eval(LossSpec::least_squares(1.0), vec({1, 1}), {vec({1, -1}), 0.0}) == 0.0);

  SUBCASE("errors") {
    CHECK_THROWS_AS(loss_eval(sq, 0.0, {Vector::Ones(1), 1.5}), LabelRangeError);
    CHECK_THROWS_AS(loss_eval(LossSpec::logistic(), 0.0, {Vector::Ones(1), 0.5}), LabelRangeError);
    CHECK_THROWS_AS(loss_eval(LossSpec::least_squares(1.0), vec({1, 1, 1}), {vec({1, -1}), 0.0}), DimensionError);
    CHECK_THROWS_AS(loss_eval(LossSpec::generic_exp_concave(1.0, 1.0), 0.0, {Vector::Ones(1), 0.0}), ArgumentError);
  }
}

TEST_CASE("logistic loss is stable and its label pair is minimized at zero") {
  CHECK(logistic_loss(800.0) == doctest::Approx(0.0));
  CHECK(logistic_loss(-800.0) == doctest::Approx(800.0));
  CHECK(sigmoid(-800.0) >= 0.0);
  CHECK(sigmoid(800.0) == 1.0);
  const auto spec = LossSpec::logistic();
  for (int k = -200; k <= 200; ++k) {
    const double z = 0.05 * k;
    const double pair = loss_eval(spec, z, {Vector::Ones(1), 1.0}) + loss_eval(spec, z, {Vector::Ones(1), -1.0});
    if (k == 0) CHECK(pair == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
    else CHECK(pair > 2.0 * std::log(2.0));
  }
}

TEST_CASE("path length") {
  CHECK(path_length({{vec({0.3, 0.3}), vec({0.3, 0.3}), vec({0.3, 0.3})}}) == 0.0);
  CHECK(path_length({{vec({0, 0}), vec({3, 4})}}) == 5.0);
  CHECK(path_length({{vec({0}), vec({1}), vec({0}), vec({1})}}) == 3.0);
  CHECK(path_length({{vec({2})}}) == 0.0);
  CHECK_THROWS_AS(path_length({}), ArgumentError);
}

TEST_CASE("dynamic regret prefix sums") {
  CHECK(dynamic_regret({0.3, 0.7}, {0.3, 0.7}).final_regret() == 0.0);
  CHECK(dynamic_regret({1, 1}, {0, 0}).cum_dynamic_regret == std::vector<double>{1, 2});
  CHECK(dynamic_regret({0, 2}, {1, 0}).cum_dynamic_regret == std::vector<double>{-1, 1});
  CHECK_THROWS_AS(dynamic_regret({1}, {1, 2}), ArgumentError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  std::vector<double> a(500), b(500);
  for (int i = 0; i < 500; ++i) a[i] = u(rng), b[i] = u(rng);
  const auto r = dynamic_regret(a, b);
  double acc = 0.0;
  for (int i = 0; i < 500; ++i) {
    acc += a[i] - b[i];
    CHECK(r.cum_dynamic_regret[i] == acc);
  }
}

TEST_CASE("ball projection") {
  const DomainSpec dom(3, 1.5, vec({0.5, -0.5, 1.0}));
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  auto draw = [&] {
    Vector v(3);
    for (int i = 0; i < 3; ++i) v[i] = 3.0 * n01(rng);
    return v;
  };
  for (int k = 0; k < 1000; ++k) {
    const Vector a = draw(), b = draw();
    const Vector pa = dom.project(a), pb = dom.project(b);
    CHECK(dom.contains(pa));
    CHECK(dom.project(pa) == pa);
    CHECK((pa - pb).norm() <= (a - b).norm() + 1e-12);
  }
  const Vector far = dom.center + vec({4.0, 0.0, 0.0});
  const Vector p = dom.project(far);
  CHECK((p - dom.center).norm() == doctest::Approx(1.5));
  CHECK(p[1] == dom.center[1]);
  CHECK(dom.diameter() == 3.0);
  CHECK_THROWS_AS(DomainSpec(0, 1.0), ArgumentError);
  CHECK_THROWS_AS(DomainSpec(2, -1.0), ArgumentError);
  CHECK_THROWS_AS(dom.contains(vec({1.0})), DimensionError);
}

TEST_CASE("comparator sequences inside the domain") {
  const DomainSpec dom(1, 1.0);
  CHECK(ComparatorSequence{{vec({0.5}), vec({-1.0})}}.within(dom));
  CHECK_FALSE(ComparatorSequence{{vec({0.5}), vec({1.5})}}.within(dom));
}
