#include <catch_amalgamated.hpp>

#include <sstream>

#include "emcorr/nonmono.hpp"

using namespace emcorr;
using Catch::Approx;

namespace {

SchmidtState qutrit(double c0, double c1) {
  return make_schmidt_state({c0, c1, std::sqrt(1.0 - c0 * c0 - c1 * c1)});
}

struct Row {
  double c0, c1, e, n, qe, qn, dq;
};

}  // namespace

TEST_CASE("deviation reference rows") {
  const std::array<Row, 4> rows{{
      {0.1, 0.1, 0.1614, 0.2080, 89.8142, 79.2010, 10.6132},
      {0.3, 0.8, 1.2347, 0.8116, 22.0964, 18.8423, 3.2540},
      {0.6, 0.6, 1.5755, 0.9950, 0.6001, 0.5020, 0.0982},
      {0.9, 0.3, 0.8911, 0.6495, 43.7784, 35.0527, 8.7257},
  }};
  for (const auto& r : rows) {
    const auto d = deviation_metrics(qutrit(r.c0, r.c1));
    CHECK(d.e == Approx(r.e).margin(1e-3));
    CHECK(d.n == Approx(r.n).margin(1e-3));
    CHECK(d.q_e == Approx(r.qe).margin(2e-2));
    CHECK(d.q_n == Approx(r.qn).margin(2e-2));
    CHECK(d.dq == Approx(r.dq).margin(2e-2));
  }
  const auto u = deviation_metrics(maximally_entangled(3));
  CHECK(u.q_e == Approx(0.0).margin(1e-12));
  CHECK(u.q_n == Approx(0.0).margin(1e-12));
  CHECK(u.dq == Approx(0.0).margin(1e-12));
  CHECK_THROWS_AS(deviation_metrics(maximally_entangled(2)), Error);
}

TEST_CASE("measured values as deviations") {
  CHECK(100.0 * (1.0 - 0.848) == Approx(15.2));
  CHECK(100.0 * (std::log2(3.0) - 1.233) / std::log2(3.0) == Approx(22.2).margin(0.05));
}

TEST_CASE("gradients vanish at the maximally entangled point") {
  const double c = 1.0 / std::sqrt(3.0);
  const auto g = gradients(c, c);
  CHECK(g.de_dc0 == Approx(0.0).margin(1e-9));
  CHECK(g.de_dc1 == Approx(0.0).margin(1e-9));
  CHECK(g.dn_dc0 == Approx(0.0).margin(1e-9));
  CHECK(g.dn_dc1 == Approx(0.0).margin(1e-9));
}

TEST_CASE("gradients match central differences") {
  const auto check_point = [](double c0, double c1) {
    const double h = 1e-6;
    const auto fd = [&](auto f, double dc0, double dc1) {
      return (f(qutrit(c0 + dc0, c1 + dc1)) - f(qutrit(c0 - dc0, c1 - dc1))) / (2.0 * h);
    };
    const auto e = [](const SchmidtState& s) { return eof_pure(s); };
    const auto n = [](const SchmidtState& s) { return negativity_pure(s); };
    const auto g = gradients(c0, c1);
    CHECK(g.de_dc0 == Approx(fd(e, h, 0.0)).epsilon(1e-6).margin(1e-8));
    CHECK(g.de_dc1 == Approx(fd(e, 0.0, h)).epsilon(1e-6).margin(1e-8));
    CHECK(g.dn_dc0 == Approx(fd(n, h, 0.0)).epsilon(1e-6).margin(1e-8));
    CHECK(g.dn_dc1 == Approx(fd(n, 0.0, h)).epsilon(1e-6).margin(1e-8));
  };
  check_point(0.3, 0.8);
  Rng rng(9);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  int done = 0;
  while (done < 200) {
    const double c0 = u(rng), c1 = u(rng);
    if (1.0 - c0 * c0 - c1 * c1 < 0.01) continue;
    check_point(c0, c1);
    ++done;
  }
}

TEST_CASE("gradients reject points off the open simplex") {
  // c2 = 0.02 here: close to the edge but still interior.
  const auto near = gradients(0.999, 0.04);
  CHECK(std::isfinite(near.de_dc0));
  CHECK(std::isfinite(near.dn_dc1));
  for (auto [c0, c1] : {std::pair{0.999, 0.05}, {0.6, 0.8}, {0.0, 0.5}, {0.5, 0.0}}) {
    try {
      gradients(c0, c1);
      FAIL("expected BoundaryPoint");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::BoundaryPoint);
    }
  }
}

TEST_CASE("the order inversion between two qutrit states") {
  const auto a = deviation_metrics(qutrit(0.4, 0.9));
  const auto b = deviation_metrics(qutrit(0.5, 0.1));
  CHECK(a.e == Approx(0.8210).margin(1e-4));
  CHECK(a.n == Approx(0.5852).margin(1e-4));
  CHECK(b.e == Approx(0.8879).margin(1e-4));
  CHECK(b.n == Approx(0.5661).margin(1e-4));
  CHECK(b.e > a.e);
  CHECK(b.n < a.n);
}

TEST_CASE("qutrit scan at moderate resolution") {
  const auto r = scan_simplex(400, 3, 50);
  REQUIRE(r.interior_max);
  CHECK(r.interior_max->dq == Approx(12.1418).margin(1e-3));
  CHECK(r.interior_max->c0 == Approx(0.1711).margin(1e-3));
  CHECK(r.interior_max->c1 == Approx(r.interior_max->c0).margin(1e-6));
  CHECK(r.grid_max.dq >= r.interior_max->dq - 0.05);
  CHECK(r.non_monotone_states > 0);
  CHECK(r.pairs.size() == 50);
  for (const auto& p : r.pairs) {
    const auto a = deviation_metrics(qutrit(p.first.c0, p.first.c1));
    const auto b = deviation_metrics(qutrit(p.second.c0, p.second.c1));
    CHECK(a.e > b.e);
    CHECK(a.n < b.n);
  }
  for (const auto& g : r.grid) REQUIRE(g.dq >= 0.0);
}

TEST_CASE("qubit scan has no inversions") {
  const auto r = scan_simplex(2000, 2);
  CHECK(r.non_monotone_states == 0);
  CHECK(r.pairs.empty());
}

TEST_CASE("scan validation and CSV") {
  CHECK_THROWS_AS(scan_simplex(10, 3), Error);
  CHECK_THROWS_AS(scan_simplex(100, 4), Error);
  const auto r = scan_simplex(50, 3);
  std::ostringstream os;
  write_scan_csv(os, r, 10);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "c0,c1,E,N,Q_E,Q_N,dQ");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == (r.grid.size() + 9) / 10);
}
