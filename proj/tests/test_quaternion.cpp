#include <cmath>

#include "doctest.h"
#include "qma/quaternion.hpp"
#include "qma/rng.hpp"

using namespace qma;

namespace {
const Quaternion e0{1, 0, 0, 0};
const Quaternion e1{0, 1, 0, 0};
const Quaternion e2{0, 0, 1, 0};
const Quaternion e3{0, 0, 0, 1};

Quaternion rand_quat(Rng& rng) {
  return {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
          rng.uniform(-1, 1)};
}
}  // namespace

TEST_CASE("quaternion multiplication table") {
  CHECK((e1 * e2 - e3).norm() == 0.0);
  CHECK((e2 * e1 + e3).norm() == 0.0);
  CHECK((e2 * e3 - e1).norm() == 0.0);
  CHECK((e3 * e1 - e2).norm() == 0.0);
  for (const Quaternion& e : {e1, e2, e3}) CHECK((e * e + e0).norm() == 0.0);
}

TEST_CASE("(1+e1)(1-e1) = 2") {
  const Quaternion a = e0 + e1;
  const Quaternion b = e0 - e1;
  const Quaternion p = a * b;
  CHECK(p.w == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(p.x == 0.0);
  CHECK(p.y == 0.0);
  CHECK(p.z == 0.0);
}

TEST_CASE("associativity on 1000 random triples") {
  Rng rng(42);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Quaternion a = rand_quat(rng);
    const Quaternion b = rand_quat(rng);
    const Quaternion c = rand_quat(rng);
    const double rel = ((a * b) * c - a * (b * c)).norm() /
                       (a.norm() * b.norm() * c.norm());
    worst = std::max(worst, rel);
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("conjugation reverses products and norm is multiplicative") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const Quaternion a = rand_quat(rng);
    const Quaternion b = rand_quat(rng);
    CHECK(((a * b).conj() - b.conj() * a.conj()).norm() <= 1e-14);
    CHECK(std::fabs((a * b).norm() - a.norm() * b.norm()) <=
          1e-14 * a.norm() * b.norm());
  }
}

TEST_CASE("q conj(q) is |q|^2") {
  Rng rng(11);
  const Quaternion q = rand_quat(rng);
  const Quaternion p = q * q.conj();
  CHECK(p.w == doctest::Approx(q.norm2()).epsilon(1e-15));
  CHECK(std::fabs(p.x) + std::fabs(p.y) + std::fabs(p.z) <= 1e-16);
}
