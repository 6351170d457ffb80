#include <catch_amalgamated.hpp>

#include "emcorr/monotones.hpp"

using namespace emcorr;
using Catch::Approx;

TEST_CASE("closed forms on reference states") {
  const auto product = make_schmidt_state({1.0, 0.0, 0.0});
  CHECK(negativity_pure(product) == 0.0);
  CHECK(eof_pure(product) == 0.0);

  const auto uniform = maximally_entangled(3);
  CHECK(negativity_pure(uniform) == Approx(1.0));
  CHECK(eof_pure(uniform) == Approx(std::log2(3.0)));

  CHECK(negativity_pure(make_schmidt_state({0.3, 0.8, std::sqrt(0.27)})) == Approx(0.8116).margin(1e-4));
  CHECK(eof_pure(make_schmidt_state({0.1, 0.1, std::sqrt(0.98)})) == Approx(0.1614).margin(1e-4));
}

TEST_CASE("monotones ignore coefficient order") {
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    const auto s = random_schmidt(4, rng);
    std::vector<double> c(s.coefficients().begin(), s.coefficients().end());
    std::ranges::reverse(c);
    std::swap(c[0], c[2]);
    const auto p = make_schmidt_state(c);
    CHECK(negativity_pure(p) == Approx(negativity_pure(s)).margin(1e-14));
    CHECK(eof_pure(p) == Approx(eof_pure(s)).margin(1e-14));
  }
}

TEST_CASE("partial-transpose negativity agrees with the Schmidt formula") {
  Rng rng(2);
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(t % 4);
    const auto s = random_schmidt(d, rng);
    CHECK(negativity_ppt(to_density(s), s.shape()) == Approx(negativity_pure(s)).margin(1e-8));
  }
  const ComplexMatrix ra{{0.5, 0.5}, {0.5, 0.5}};
  CHECK(negativity_ppt(kron(ra, ra), {2, 2}) == Approx(0.0).margin(1e-12));
}

TEST_CASE("isotropic negativity") {
  for (double alpha : {0.0, 0.1, 0.25, 0.5, 0.848, 1.0}) {
    const auto iso = IsotropicState::from_alpha(3, alpha);
    const double expected = std::max(0.0, (3.0 * iso.fidelity() - 1.0) / 2.0);
    CHECK(negativity_isotropic(iso) == Approx(expected).margin(1e-12));
    CHECK(negativity_ppt(isotropic_density(iso), {3, 3}) == Approx(expected).margin(1e-8));
  }
}

TEST_CASE("inversions on the published correlator values") {
  CHECK(invert_relation(Relation::from_mp_pure, 0.899, 3).value == Approx(0.8485).margin(1e-4));
  CHECK(invert_relation(Relation::from_pcc, 0.848, 3).value == Approx(0.848).margin(1e-12));
  const auto iso1 = invert_relation(Relation::from_mp_isotropic, 0.899, 3, 1);
  CHECK(iso1.value == Approx(0.798).margin(1e-3));
  CHECK(iso1.method_name() == "from_mp_isotropic(m=1)");

  const std::vector<Measured> two{{0.943, 0.003}, {0.899, 0.013}};
  const auto iso2 = invert_relation(Relation::from_mp_isotropic, two, 3, 2);
  CHECK(iso2.value == Approx(0.842).margin(1e-3));
  REQUIRE(iso2.sigma);
  CHECK(*iso2.sigma == Approx(std::hypot(0.003, 0.013)).epsilon(1e-12));

  const std::vector<Measured> pccs{{0.904, {}}, {0.848, {}}};
  CHECK(invert_relation(Relation::from_pcc_sum, pccs, 3).value == Approx(0.752).margin(1e-3));
  const auto a = invert_relation(Relation::alpha, 0.899, 3);
  CHECK(a.value == Approx(0.8485).margin(1e-3));
  CHECK(a.kind == MonotoneKind::mixedness);
  CHECK(invert_relation(Relation::from_mi, 1.233, 3).value == Approx(1.233));
}

TEST_CASE("inversion range handling") {
  const auto c = invert_relation(Relation::from_mp_pure, 0.2, 3);
  CHECK(c.value == 0.0);
  CHECK(c.clamped);
  CHECK_FALSE(invert_relation(Relation::from_mp_pure, 0.5, 3).clamped);
  CHECK_THROWS_AS(invert_relation(Relation::from_mp_pure, 1.2, 3), Error);
  CHECK_THROWS_AS(invert_relation(Relation::from_pcc, -1.5, 3), Error);
  CHECK_THROWS_AS(invert_relation(Relation::from_mp_isotropic, 0.9, 3), Error);
  CHECK_THROWS_AS(invert_relation(Relation::ppt_oracle, 0.9, 3), Error);
}

TEST_CASE("iso_fidelity agrees with the single-basis isotropic inversion") {
  for (double mp = 0.4; mp <= 1.0; mp += 0.05) {
    const auto a = invert_relation(Relation::iso_fidelity, mp, 3);
    const auto b = invert_relation(Relation::from_mp_isotropic, mp, 3, 1);
    CHECK(a.value == Approx(b.value).margin(1e-12));
  }
}

TEST_CASE("forward MP relation") {
  const auto u = mp_relation_forward(maximally_entangled(3));
  CHECK(u.mp_fourier == Approx(1.0));
  CHECK(u.mp_schmidt == Approx(1.0));
  CHECK(u.mp_sum == Approx(2.0));

  const auto p = mp_relation_forward(make_schmidt_state({1.0, 0.0, 0.0}));
  CHECK(p.mp_fourier == Approx(1.0 / 3.0));
  CHECK(p.mp_schmidt == Approx(1.0));
  CHECK(p.mp_sum == Approx(4.0 / 3.0));

  Rng rng(3);
  for (std::size_t d = 2; d <= 6; ++d)
    for (int t = 0; t < 1000; ++t) {
      const auto s = random_schmidt(d, rng);
      const double line = (1.0 + 2.0 * negativity_pure(s)) / static_cast<double>(d);
      CHECK(mp_relation_forward(s).mp_fourier == Approx(line).margin(1e-10));
    }
}

TEST_CASE("pearson sum identity") {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(t % 4);
    const auto s = random_schmidt(d, rng);
    const auto rho = to_density(s);
    const double sum = pcc_operator(rho, z_operator(d), z_operator(d)) +
                       pcc_operator(rho, x_operator(d), x_operator(d));
    CHECK(sum == Approx(1.0 + 2.0 * negativity_pure(s) / (static_cast<double>(d) - 1.0)).margin(1e-10));
  }
}

TEST_CASE("isotropic MP chain") {
  for (std::size_t d : {2u, 3u, 5u}) {
    const auto f = fourier_basis(d);
    for (int k = 0; k <= 4; ++k) {
      const double alpha = 0.25 * k;
      const auto iso = IsotropicState::from_alpha(d, alpha);
      const auto rho = isotropic_density(iso);
      const double mp = mutual_predictability(joint_probability_matrix(rho, f, conjugate_basis(f)));
      CHECK(mp == Approx(alpha + (1.0 - alpha) / static_cast<double>(d)).margin(1e-10));
      CHECK(invert_relation(Relation::from_mp_isotropic, mp, d, 1).value ==
            Approx(negativity_isotropic(iso)).margin(1e-10));
    }
  }
}
