#include <catch_amalgamated.hpp>

#include "emcorr/bases.hpp"
#include "emcorr/states.hpp"

using namespace emcorr;
using Catch::Approx;

namespace {

bool same_vector(std::span<const cplx> a, std::span<const cplx> b, double tol = 1e-12) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("fourier basis entries") {
  const auto f2 = fourier_basis(2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(same_vector(f2[0], std::vector<cplx>{s, s}));
  CHECK(same_vector(f2[1], std::vector<cplx>{s, -s}));

  const auto f3 = fourier_basis(3);
  const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const double n = 1.0 / std::sqrt(3.0);
  CHECK(same_vector(f3[0], std::vector<cplx>{n, n, n}));
  CHECK(same_vector(f3[1], std::vector<cplx>{n, n * w, n * w * w}));
  CHECK(same_vector(f3[2], std::vector<cplx>{n, n * w * w, n * w}));
}

TEST_CASE("computational and fourier bases are unbiased") {
  for (std::size_t d : {2u, 3u, 5u, 7u}) {
    CHECK(is_mutually_unbiased(computational_basis(d), fourier_basis(d)));
    CHECK_FALSE(is_mutually_unbiased(computational_basis(d), computational_basis(d)));
  }
  const auto f = fourier_basis(3);
  CHECK_FALSE(is_mutually_unbiased(f, conjugate_basis(f)));
  CHECK_THROWS_AS(is_mutually_unbiased(fourier_basis(2), fourier_basis(3)), Error);
}

TEST_CASE("conjugate fourier basis permutes outcomes") {
  const auto f3 = fourier_basis(3);
  const auto c3 = conjugate_basis(f3);
  CHECK(c3.label().kind == BasisKind::conjugate_fourier);
  CHECK(same_vector(c3[0], f3[0]));
  CHECK(same_vector(c3[1], f3[2]));
  CHECK(same_vector(c3[2], f3[1]));

  const auto f5 = fourier_basis(5);
  const auto c5 = conjugate_basis(f5);
  const std::array<std::size_t, 5> perm{0, 4, 3, 2, 1};
  for (std::size_t i = 0; i < 5; ++i) CHECK(same_vector(c5[i], f5[perm[i]]));

  const auto z = computational_basis(4);
  const auto cz = conjugate_basis(z);
  for (std::size_t i = 0; i < 4; ++i) CHECK(same_vector(cz[i], z[i]));

  const auto back = conjugate_basis(c5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(same_vector(back[i], f5[i]));
  CHECK(back.label() == f5.label());
}

TEST_CASE("mub families for prime dimensions") {
  for (std::size_t d : {2u, 3u, 5u, 7u}) {
    const auto fam = mub_family(d);
    REQUIRE(fam.size() == d + 1);
    for (std::size_t p = 0; p < fam.size(); ++p)
      for (std::size_t q = p + 1; q < fam.size(); ++q)
        CHECK(is_mutually_unbiased(fam[p], fam[q]));
  }
  CHECK_THROWS_AS(mub_family(4), Error);
  try {
    mub_family(4);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotPrime);
  }
}

TEST_CASE("non-orthonormal vectors are rejected") {
  std::vector<std::vector<cplx>> v{{1.0, 0.0}, {1.0, 0.0}};
  CHECK_THROWS_AS(MeasurementBasis(v, {}), Error);
}

TEST_CASE("x operator identities") {
  const auto x2 = x_operator(2);
  CHECK(x2 == ComplexMatrix{{0.0, 2.0}, {2.0, 0.0}});
  CHECK(matmul(x2, x2) == ComplexMatrix::identity(2) * 4.0);

  for (std::size_t d = 2; d <= 7; ++d) {
    const auto x = x_operator(d);
    auto rhs = x * (2.0 * (static_cast<double>(d) - 2.0));
    rhs += ComplexMatrix::identity(d) * (4.0 * (static_cast<double>(d) - 1.0));
    CHECK(max_abs(matmul(x, x) - rhs) < 1e-12);

    const auto e = hermitian_eigenvalues(x);
    CHECK(e[0] == Approx(2.0 * (static_cast<double>(d) - 1.0)).margin(1e-10));
    for (std::size_t k = 1; k < d; ++k) CHECK(e[k] == Approx(-2.0).margin(1e-10));
  }
}

TEST_CASE("local X has zero mean on Schmidt states") {
  Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(t % 5);
    const auto s = random_schmidt(d, rng);
    const auto rho = to_density(s);
    const auto id = ComplexMatrix::identity(d);
    CHECK(std::abs(trace_of_product(rho, kron(x_operator(d), id))) < 1e-12);
    CHECK(std::abs(trace_of_product(rho, kron(id, x_operator(d)))) < 1e-12);
  }
}

TEST_CASE("outcome values") {
  CHECK(std::ranges::equal(default_outcome_values(3).values(), std::vector<double>{0, 1, -1}));
  CHECK(std::ranges::equal(default_outcome_values(5).values(), std::vector<double>{0, 1, -1, 2, -2}));
  const std::vector<int> pairing{0, 2, 1};
  CHECK(std::ranges::equal(default_outcome_values(3).permuted(pairing).values(),
                           std::vector<double>{0, -1, 1}));
  CHECK_THROWS_AS(OutcomeValues({1.0, 1.0, 1.0}), Error);

  const auto z = computational_basis(3);
  CHECK(observable(z, OutcomeValues({0.0, 1.0, 2.0})) == z_operator(3));
}
