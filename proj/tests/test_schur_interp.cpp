#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "speccas/ensembles.hpp"
#include "speccas/error.hpp"
#include "speccas/schur_interp.hpp"

using namespace speccas;

TEST_CASE("blaschke factory endpoints") {
  SchurMap b0 = SchurMap::blaschke(0.0);
  for (cplx z : oracles::disk_points(4, 8)) CHECK(std::abs(eval_map(b0, z) - z) < 1e-15);

  SchurMap b = SchurMap::blaschke(0.5);
  CHECK(std::abs(eval_map(b, 0.0) - cplx(-0.5)) < 1e-15);
  CHECK(std::abs(eval_map(b, 1.0) - 1.0) < 1e-15);
  CHECK(std::abs(eval_map(b, 0.5)) < 1e-15);

  CHECK_THROWS_AS(SchurMap::blaschke(1.0), Error);
  CHECK_THROWS_AS(SchurMap::blaschke(-0.1), Error);
}

TEST_CASE("to_rational agrees with direct evaluation") {
  std::vector<SchurMap> maps = {
      SchurMap::identity(),
      SchurMap::affine(0.3),
      SchurMap::blaschke(0.6),
      SchurMap::mobius(cplx(0.5), cplx(0.1), cplx(0.2), cplx(1.0)),
      SchurMap::polynomial({cplx(0.1), cplx(0.2, 0.1), cplx(0.0), cplx(0.3)}),
      SchurMap::rational({cplx(0.0), cplx(1.0)}, {cplx(1.5), cplx(-0.5)}),
      SchurMap::composition({SchurMap::affine(0.5), SchurMap::blaschke(0.5)}),
      SchurMap::composition(
          {SchurMap::blaschke(0.3), SchurMap::blaschke(0.3), SchurMap::blaschke(0.3)}),
  };
  for (const auto& map : maps) {
    RationalCoeffs rc = to_rational(map);
    for (cplx z : oracles::disk_points(5, 9)) {
      cplx direct = eval_map(map, z);
      cplx from_coeffs = poly_eval(rc.num, z) / poly_eval(rc.den, z);
      CHECK(std::abs(direct - from_coeffs) < 1e-12);
    }
  }
}

TEST_CASE("schur_step") {
  SUBCASE("R = z gives the constant 1") {
    SchurMap phi = schur_step(SchurMap::polynomial({cplx(0.0), cplx(1.0)}), 1e-10);
    for (cplx z : oracles::disk_points(4, 8)) CHECK(std::abs(eval_map(phi, z) - 1.0) < 1e-14);
  }

  SUBCASE("R = z^2 gives z") {
    SchurMap phi = schur_step(SchurMap::polynomial({cplx(0.0), cplx(0.0), cplx(1.0)}), 1e-10);
    for (cplx z : oracles::disk_points(4, 8)) CHECK(std::abs(eval_map(phi, z) - z) < 1e-14);
  }

  SUBCASE("the parametric composite divides to 1/(1+t-tz)") {
    double t = 0.4;
    SchurMap R = SchurMap::rational({cplx(0.0), cplx(1.0)}, {cplx(1.0 + t), cplx(-t)});
    SchurMap phi = schur_step(R, 1e-10);
    for (cplx z : oracles::disk_points(5, 9))
      CHECK(std::abs(eval_map(phi, z) - 1.0 / (1.0 + t - t * z)) < 1e-13);
  }

  SUBCASE("rejections") {
    CHECK_THROWS_AS(schur_step(SchurMap::polynomial({cplx(0.5), cplx(0.5)}), 1e-10), Error);
    CHECK_THROWS_AS(
        schur_step(SchurMap::composition({SchurMap::blaschke(0.5), SchurMap::blaschke(0.5)}),
                   1e-10),
        Error);
  }
}

TEST_CASE("solve_two_point") {
  SUBCASE("the constant parameter reproduces the blaschke factor") {
    SchurSolution sol = solve_two_point({0.5}, SchurMap::polynomial({cplx(1.0)}));
    SchurMap b = SchurMap::blaschke(0.5);
    for (cplx z : oracles::disk_points(6, 12))
      CHECK(std::abs(eval_map(sol.s, z) - eval_map(b, z)) < 1e-13);
    CHECK(sol.certificate.residual_at_t < 1e-14);
    CHECK(sol.certificate.residual_at_1 < 1e-14);
  }

  SUBCASE("a thrice-composed blaschke parameter certifies") {
    SchurMap phi = SchurMap::composition(
        {SchurMap::blaschke(0.3), SchurMap::blaschke(0.3), SchurMap::blaschke(0.3)});
    SchurSolution sol = solve_two_point({0.5}, phi);
    CHECK(sol.certificate.residual_at_t < 1e-10);
    CHECK(sol.certificate.residual_at_1 < 1e-8);
    CHECK(sol.certificate.sup_estimate <= 1.0 + 1e-9);
    // The construction matches b_t(z) * phi(b_t(z)) pointwise.
    SchurMap b = SchurMap::blaschke(0.5);
    for (cplx z : oracles::disk_points(5, 9)) {
      cplx w = eval_map(b, z);
      CHECK(std::abs(eval_map(sol.s, z) - w * eval_map(phi, w)) < 1e-12);
    }
  }

  SUBCASE("a nearly vanishing node degenerates to the identity map") {
    double t = 1e-8;
    SchurSolution sol = solve_two_point({t}, SchurMap::polynomial({cplx(1.0)}));
    for (cplx z : oracles::disk_points(4, 8))
      CHECK(std::abs(eval_map(sol.s, z) - z) <= 3.0 * t);
  }

  SUBCASE("rejections") {
    CHECK_THROWS_AS(solve_two_point({0.5}, SchurMap::polynomial({cplx(0.0), cplx(2.0)})), Error);
    CHECK_THROWS_AS(solve_two_point({0.5}, SchurMap::polynomial({cplx(0.5)})), Error);
    CHECK_THROWS_AS(solve_two_point({1.5}, SchurMap::polynomial({cplx(1.0)})), Error);
  }
}

TEST_CASE("verify_interpolation") {
  CHECK(verify_interpolation(SchurMap::blaschke(0.5), 0.5).pass);
  CHECK_FALSE(verify_interpolation(SchurMap::identity(), 0.5).pass);
}

TEST_CASE("random parameters produce verified solutions") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t_pick(0.05, 0.95);
  for (int trial = 0; trial < 100; ++trial) {
    double t = t_pick(rng);
    SchurMap phi = random_blaschke_product(rng);
    SchurSolution sol = solve_two_point({t}, phi);
    InterpolationReport report = verify_interpolation(sol.s, t);
    CHECK(report.pass);
  }
}

TEST_CASE("factorization round-trip on vanishing-at-origin products") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    RationalCoeffs phi = to_rational(random_blaschke_product(rng));
    RationalCoeffs R{poly_mul({cplx(0.0), cplx(1.0)}, phi.num), phi.den};  // z * phi
    SchurMap R_map = SchurMap::rational(R.num, R.den);
    SchurMap recovered = schur_step(R_map, 1e-10);
    for (cplx z : oracles::disk_points(4, 8))
      CHECK(std::abs(z * eval_map(recovered, z) - eval_map(R_map, z)) < 1e-12);
  }
}

TEST_CASE("inner parameters give unimodular boundary values") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    SchurMap phi = random_blaschke_product(rng);
    SchurSolution sol = solve_two_point({0.4}, phi);
    for (int k = 0; k < 256; ++k) {
      cplx z = std::polar(1.0, 2.0 * 3.141592653589793 * k / 256);
      CHECK(std::abs(std::abs(eval_map(sol.s, z)) - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("second-layer pullback factors through the first schur step") {
  // p2(z) = b_t(z) Phi(b_t(z)) composed after p1(z) = t + (1-t)z equals
  // f_t(z) Phi(f_t(z)) with f_t the two-layer composite.
  double t = 0.5;
  SchurMap phi = SchurMap::composition({SchurMap::blaschke(0.3), SchurMap::blaschke(0.3)});
  SchurSolution p2 = solve_two_point({t}, phi);
  RationalCoeffs p1{{t, 1.0 - t}, {1.0}};
  RationalCoeffs composed = compose_rational(to_rational(p2.s), p1);
  SchurMap R = SchurMap::rational(composed.num, composed.den);

  for (cplx z : oracles::disk_points(5, 9)) {
    cplx ft = oracles::param_cycle(t, z);
    CHECK(std::abs(eval_map(R, z) - ft * eval_map(phi, ft)) < 1e-12);
  }

  // R(0) = 0, so the division step applies and recovers a Schur factor.
  SchurMap factor = schur_step(R, 1e-10);
  for (cplx z : oracles::disk_points(4, 8))
    CHECK(std::abs(z * eval_map(factor, z) - eval_map(R, z)) < 1e-12);
}
