#include <cmath>
#include <vector>

#include "doctest.h"
#include "qma/errors.hpp"
#include "qma/hyperhermitian.hpp"
#include "qma/oracle.hpp"
#include "qma/rng.hpp"

using namespace qma;

namespace {
const Quaternion qe2{0, 0, 1, 0};

// the 2x2 running example [[1, e2], [-e2, 2]]: eigenvalues (3 +- sqrt 5)/2
HyperhermitianMatrix example22() {
  QuatMatrix m(2);
  m(0, 0) = Quaternion::real(1);
  m(1, 1) = Quaternion::real(2);
  m(0, 1) = qe2;
  m(1, 0) = -qe2;
  return HyperhermitianMatrix(m);
}
}  // namespace

TEST_CASE("structure matrices satisfy the quaternionic identities") {
  for (int n = 1; n <= 3; ++n) {
    const StructureMatrices s = structure_matrices(n);
    const RealMatrix id = RealMatrix::identity(4 * n);
    CHECK((s.I0 * s.J0 - s.K0).max_abs() == 0.0);
    CHECK((s.J0 * s.I0 + s.K0).max_abs() == 0.0);
    CHECK((s.I0 * s.I0 + id).max_abs() == 0.0);
    CHECK((s.J0 * s.J0 + id).max_abs() == 0.0);
    CHECK((s.K0 * s.K0 + id).max_abs() == 0.0);
  }
}

TEST_CASE("iota of 1 and of e1 at n = 1") {
  QuatMatrix one(1);
  one(0, 0) = Quaternion::real(1);
  CHECK((iota(one) - RealMatrix::identity(4)).max_abs() == 0.0);

  QuatMatrix m(1);
  m(0, 0) = Quaternion{0, 1, 0, 0};
  const double want[4][4] = {
      {0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}};
  const RealMatrix got = iota(m);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(got(i, j) == want[i][j]);
}

TEST_CASE("iota is an algebra homomorphism (n = 3)") {
  Rng rng(5);
  auto rand_entry = [&rng]() {
    return Quaternion(rng.uniform(-1, 1), rng.uniform(-1, 1),
                      rng.uniform(-1, 1), rng.uniform(-1, 1));
  };
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    QuatMatrix m(3), k(3);
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) {
        m(r, s) = rand_entry();
        k(r, s) = rand_entry();
      }
    const double rel = (iota(m * k) - iota(m) * iota(k)).frobenius_norm() /
                       (iota(m).frobenius_norm() * iota(k).frobenius_norm());
    worst = std::max(worst, rel);
    CHECK((iota(m.conj_transpose()) - iota(m).transpose()).max_abs() == 0.0);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("iota of hyperhermitian matrices is symmetric and anticommutes") {
  Rng rng(9);
  for (int n = 1; n <= 3; ++n) {
    const StructureMatrices s = structure_matrices(n);
    const HyperhermitianMatrix u = random_hyperhermitian(rng, n, 1.0);
    const RealMatrix iu = iota(u.quat());
    CHECK((iu - iu.transpose()).max_abs() == 0.0);
    CHECK((s.I0 * iu * s.I0 + iu).max_abs() <= 1e-15);
    CHECK((s.J0 * iu * s.J0 + iu).max_abs() <= 1e-15);
    CHECK((s.K0 * iu * s.K0 + iu).max_abs() <= 1e-15);

    // eigenvalues come in quadruples
    const std::vector<double> ev = symmetric_eigenvalues(iu);
    for (int g = 0; g < n; ++g) {
      const double spread = ev[4 * g + 3] - ev[4 * g];
      const double mean = 0.25 * (ev[4 * g] + ev[4 * g + 1] + ev[4 * g + 2] +
                                  ev[4 * g + 3]);
      CHECK(spread <= 1e-10 * (1.0 + std::fabs(mean)));
    }
  }
}

TEST_CASE("iota_inverse inverts iota") {
  Rng rng(13);
  QuatMatrix m(2);
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s)
      m(r, s) = Quaternion(rng.uniform(-1, 1), rng.uniform(-1, 1),
                           rng.uniform(-1, 1), rng.uniform(-1, 1));
  const QuatMatrix back = iota_inverse(iota(m));
  CHECK((back - m).max_entry_norm() == 0.0);
}

TEST_CASE("p projector properties") {
  Rng rng(17);
  for (int n = 1; n <= 3; ++n) {
    const int dim = 4 * n;
    CHECK((p_project(RealMatrix::identity(dim)) - RealMatrix::identity(dim))
              .max_abs() == 0.0);

    const HyperhermitianMatrix u = random_hyperhermitian(rng, n, 1.0);
    const RealMatrix iu = iota(u.quat());
    CHECK((p_project(iu) - iu).max_abs() <= 1e-15 * (1.0 + iu.max_abs()));

    RealMatrix b(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) b(i, j) = rng.uniform(-1, 1);
    const RealMatrix pb = p_project(b);
    CHECK((p_project(pb) - pb).max_abs() <= 1e-14 * b.frobenius_norm());

    // positive semidefinite input stays positive semidefinite, norm shrinks
    const RealMatrix sym = b.transpose() * b;
    const RealMatrix ps = p_project(sym);
    const std::vector<double> ev = symmetric_eigenvalues(ps);
    const std::vector<double> evs = symmetric_eigenvalues(sym);
    CHECK(ev.front() >= -1e-14 * sym.frobenius_norm());
    CHECK(ev.back() <= evs.back() * (1.0 + 1e-14));
  }
}

TEST_CASE("moore determinant of diagonal matrices factorizes") {
  CHECK(moore_det(HyperhermitianMatrix::diagonal({1, 2, 3})) ==
        doctest::Approx(6.0).epsilon(1e-13));
  CHECK(moore_det(HyperhermitianMatrix::diagonal({-1, 2})) ==
        doctest::Approx(-2.0).epsilon(1e-13));
}

TEST_CASE("2x2 example: eigenvalues, determinant, positivity") {
  const HyperhermitianMatrix u = example22();
  const std::vector<double> ev = hh_eigenvalues(u);
  const double lo = (3.0 - std::sqrt(5.0)) / 2.0;
  const double hi = (3.0 + std::sqrt(5.0)) / 2.0;
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] == doctest::Approx(lo).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(hi).epsilon(1e-12));
  CHECK(moore_det(u) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(is_positive_definite(u, 0.3));
  CHECK_FALSE(is_positive_definite(u, 0.4));
}

TEST_CASE("is_positive_definite basics") {
  CHECK(is_positive_definite(HyperhermitianMatrix::identity(2), 0.5));
  CHECK_FALSE(is_positive_definite(HyperhermitianMatrix::diagonal({1, -0.1}), 0.0));
}

TEST_CASE("moore_det^4 = det iota on 1000 random matrices per n") {
  Rng rng(23);
  for (int n = 1; n <= 3; ++n) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const HyperhermitianMatrix u = random_hyperhermitian(rng, n, 1.0);
      const double md = moore_det(u);
      const double det = lu_determinant(iota(u.quat()));
      worst = std::max(worst, std::fabs(md * md * md * md - det) /
                                  (1.0 + std::fabs(det)));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("moore_det is monotone on the positive cone") {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const HyperhermitianMatrix u = random_posdef_hyperhermitian(rng, n);
    QuatMatrix r(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r(i, j) = Quaternion(rng.uniform(-1, 1), rng.uniform(-1, 1),
                             rng.uniform(-1, 1), rng.uniform(-1, 1));
    const HyperhermitianMatrix w =
        HyperhermitianMatrix::unchecked(r.conj_transpose() * r);
    CHECK(moore_det(u) <= moore_det(u + w) * (1.0 + 1e-12) + 1e-12);
  }
}

TEST_CASE("DegenerateSpectrum on a non-hyperhermitian input") {
  QuatMatrix m(2);
  m(0, 0) = Quaternion::real(1);
  m(1, 1) = Quaternion::real(2);
  m(0, 1) = qe2;
  m(1, 0) = qe2;  // wrong sign: not hyperhermitian
  CHECK_THROWS_AS(moore_det(HyperhermitianMatrix::unchecked(m)),
                  DegenerateSpectrum);
  CHECK_THROWS_AS(HyperhermitianMatrix{m}, Error);
}

TEST_CASE("hh_inverse") {
  CHECK((hh_inverse(HyperhermitianMatrix::identity(2)) -
         HyperhermitianMatrix::identity(2))
            .quat()
            .max_entry_norm() <= 1e-14);
  const HyperhermitianMatrix d = HyperhermitianMatrix::diagonal({2, 4});
  const HyperhermitianMatrix di = hh_inverse(d);
  CHECK(di(0, 0).w == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(di(1, 1).w == doctest::Approx(0.25).epsilon(1e-13));

  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    const HyperhermitianMatrix u = random_posdef_hyperhermitian(rng, n);
    const RealMatrix prod = iota(u.quat() * hh_inverse(u).quat());
    CHECK((prod - RealMatrix::identity(4 * n)).frobenius_norm() <= 1e-10);
  }

  CHECK_THROWS_AS(hh_inverse(HyperhermitianMatrix::diagonal({1.0, 1e-15})),
                  SingularMatrix);
}

TEST_CASE("re_trace_product") {
  const HyperhermitianMatrix id2 = HyperhermitianMatrix::identity(2);
  CHECK(re_trace_product(id2, id2) == doctest::Approx(2.0));
  CHECK(re_trace_product(id2, HyperhermitianMatrix::diagonal({3, 5})) ==
        doctest::Approx(8.0));

  Rng rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    const HyperhermitianMatrix a = random_hyperhermitian(rng, n, 1.0);
    const HyperhermitianMatrix b = random_hyperhermitian(rng, n, 1.0);
    const RealMatrix prod = iota(a.quat()) * iota(b.quat());
    double tr = 0.0;
    for (int k = 0; k < 4 * n; ++k) tr += prod(k, k);
    CHECK(std::fabs(re_trace_product(a, b) - 0.25 * tr) <= 1e-12);
  }
}
