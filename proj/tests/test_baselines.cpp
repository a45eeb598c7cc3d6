#include <doctest.h>

#include "fsmix/baselines.hpp"

using namespace fsmix;

TEST_CASE("online gradient descent steps") {
  const DomainSpec dom(1, 1.0);
  OgdState s = OgdState::init(dom, ConstantStep{0.1});
  CHECK(s.w[0] == 0.0);
  s = ogd_step(s, Vector::Ones(1), dom);
  CHECK(s.w[0] == doctest::Approx(-0.1));
  CHECK(s.round == 2);
  s = ogd_step(s, Vector::Constant(1, -30.0), dom);
  CHECK(s.w[0] == 1.0);
  const Vector before = s.w;
  s = ogd_step(s, Vector::Zero(1), dom);
  CHECK(s.w == before);
  CHECK_THROWS_AS(ogd_step(s, Vector::Constant(1, std::nan("")), dom), ArgumentError);
  CHECK_THROWS_AS(ogd_step(s, Vector::Zero(2), dom), DimensionError);
}

TEST_CASE("inverse-t schedule") {
  const DomainSpec dom(2, 5.0);
  OgdState s = OgdState::init(dom, InverseTStep{2.0});
  for (int t = 1; t <= 5; ++t) {
    CHECK(s.step_size() == doctest::Approx(2.0 / t));
    s = ogd_step(s, Vector::Zero(2), dom);
  }
}

TEST_CASE("ogd converges on a fixed quadratic") {
  const DomainSpec dom(2, 1.0);
  Vector c(2);
  c << 0.3, -0.4;
  OgdState s = OgdState::init(dom, InverseTStep{0.5});
  for (int t = 0; t < 2000; ++t) s = ogd_step(s, 2.0 * (s.w - c), dom);
  CHECK((s.w - c).norm() <= 1e-6);
}
