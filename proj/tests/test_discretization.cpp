#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vkdelay/biharmonic.hpp"
#include "vkdelay/field_ops.hpp"

using namespace vkd;

namespace {

ScalarField noise_field(const Grid& g, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarField f(g);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = d(gen);
  return f;
}

template <class F>
double interior_max_err(const ScalarField& got, int margin, F&& ref) {
  const Grid& g = got.grid();
  double worst = 0.0;
  for (int j = margin; j < g.ny() - margin; ++j)
    for (int i = margin; i < g.nx() - margin; ++i)
      worst = std::max(worst, std::abs(got(i, j) - ref(g.x(i), g.y(j))));
  return worst;
}

}  // namespace

TEST_CASE("grid geometry and validation") {
  const Grid g(1.0, 1.0, 63, 63);
  CHECK(g.h() == doctest::Approx(1.0 / 64).epsilon(1e-15));
  CHECK(g.x(0) == doctest::Approx(g.h()));
  CHECK(g.x(62) == doctest::Approx(1.0 - g.h()));
  CHECK(g.diameter() == doctest::Approx(std::sqrt(2.0)));
  CHECK(Grid(2.0, 1.0, 31, 15).h() == doctest::Approx(2.0 / 32));

  CHECK_THROWS_AS(Grid(1.0, 1.0, 3, 3), ConfigError);
  CHECK_THROWS_AS(Grid(-1.0, 1.0, 15, 15), ConfigError);
  CHECK_THROWS_AS(Grid(1.0, 1.0, 15, 31), ConfigError);  // non-square cells
}

TEST_CASE("field arithmetic and shape checks") {
  const Grid g = Grid::unit_square(7);
  ScalarField a = sample(g, [](double x, double y) { return x + y; });
  ScalarField b = sample(g, [](double x, double y) { return x * y; });
  ScalarField c = a;
  c += b;
  c -= a;
  for (std::size_t k = 0; k < c.size(); ++k) CHECK(c[k] == b[k]);
  c *= 3.0;
  CHECK(c(2, 4) == doctest::Approx(3.0 * b(2, 4)));

  const Grid g2 = Grid::unit_square(9);
  ScalarField other(g2);
  CHECK_THROWS_AS(c += other, ShapeError);
  c(0, 0) = std::nan("");
  CHECK(!c.all_finite());
  CHECK_THROWS_AS(require_finite(c, "test"), DataError);
}

TEST_CASE("laplacian exact on low-degree polynomials") {
  // Dyadic spacing: node values of these polynomials and their differences
  // are exact in double precision, so the stencil result is exact too.
  const Grid g(1.0, 1.0, 63, 63);
  const ScalarField uxy = sample(g, [](double x, double y) { return x * y; });
  CHECK(interior_max_err(laplacian(uxy), 1, [](double, double) { return 0.0; }) <= 1e-10);

  const ScalarField uq = sample(g, [](double x, double y) { return 3.0 * x * x - y * y; });
  CHECK(interior_max_err(laplacian(uq), 1, [](double, double) { return 4.0; }) <= 1e-10);

  const ScalarField uc =
      sample(g, [](double x, double y) { return x * x * x - 2.0 * y * y * y + x * y * y; });
  CHECK(interior_max_err(laplacian(uc), 1, [](double x, double y) {
          return 6.0 * x - 12.0 * y + 2.0 * x;
        }) <= 1e-10);
}

TEST_CASE("laplacian second-order convergence on a smooth field") {
  std::mt19937_64 gen(7);
  const oracle::FourierField f = oracle::FourierField::random(gen, 3);
  auto err = [&](int n) {
    const Grid g = Grid::unit_square(n);
    const ScalarField u = sample(g, [&](double x, double y) { return f(x, y); });
    const ScalarField lu = laplacian(u);
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(lu(i, j) - f.lap(g.x(i), g.y(j))));
    return worst;
  };
  const double e1 = err(31), e2 = err(63);
  CHECK(e1 / e2 > 3.0);  // h halves, error should drop ~4x
  CHECK(e1 / e2 < 5.5);
}

TEST_CASE("bilaplacian annihilates cubics away from the boundary") {
  const Grid g(1.0, 1.0, 63, 63);
  const ScalarField uc =
      sample(g, [](double x, double y) { return x * x * x + y * y * y - 3.0 * x * x * y; });
  CHECK(interior_max_err(bilaplacian(uc), 2, [](double, double) { return 0.0; }) <= 1e-10);
}

TEST_CASE("bilaplacian is symmetric positive definite") {
  const Grid g = Grid::unit_square(17);
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarField a = noise_field(g, gen);
    const ScalarField b = noise_field(g, gen);
    const double ab = inner(bilaplacian(a), b);
    const double ba = inner(a, bilaplacian(b));
    CHECK(std::abs(ab - ba) <= 1e-12 * std::max(std::abs(ab), std::abs(ba)));
    // composition structure: <B a, a> = ||L a||^2 exactly
    const double quad = inner(bilaplacian(a), a);
    const double nl = norm_h2(a);
    CHECK(quad == doctest::Approx(nl * nl).epsilon(1e-12));
    CHECK(quad > 0.0);
  }
}

TEST_CASE("derivative stencils match symbolic derivatives") {
  std::mt19937_64 gen(3);
  const oracle::FourierField f = oracle::FourierField::random(gen, 3);
  const Grid g = Grid::unit_square(63);
  const ScalarField u = sample(g, [&](double x, double y) { return f(x, y); });
  const double h2 = g.h() * g.h();
  // interior nodes only; the boundary ring feels the zero extension
  const double scale = 40.0;  // generous constant for the h^2 remainder
  const ScalarField dxx = deriv_xx(u), dyy = deriv_yy(u), dxy = deriv_xy(u);
  for (int j = 1; j < g.ny() - 1; ++j)
    for (int i = 1; i < g.nx() - 1; ++i) {
      const double x = g.x(i), y = g.y(j);
      CHECK(std::abs(dxx(i, j) - f.xx(x, y)) < scale * h2 * 100.0);
      CHECK(std::abs(dyy(i, j) - f.yy(x, y)) < scale * h2 * 100.0);
      CHECK(std::abs(dxy(i, j) - f.xy(x, y)) < scale * h2 * 100.0);
    }
}

TEST_CASE("bracket is bit-exact symmetric and bilinear") {
  const Grid g = Grid::unit_square(21);
  std::mt19937_64 gen(5);
  const ScalarField a = noise_field(g, gen);
  const ScalarField b = noise_field(g, gen);
  const ScalarField ab = vk_bracket(a, b);
  const ScalarField ba = vk_bracket(b, a);
  for (std::size_t k = 0; k < ab.size(); ++k) CHECK(ab[k] == ba[k]);

  ScalarField a2 = a;
  a2 *= 2.0;
  const ScalarField ab2 = vk_bracket(a2, b);
  for (std::size_t k = 0; k < ab.size(); ++k)
    CHECK(ab2[k] == doctest::Approx(2.0 * ab[k]).epsilon(1e-13));
}

TEST_CASE("bracket matches the symbolic bracket of smooth fields") {
  std::mt19937_64 gen(13);
  const oracle::FourierField fu = oracle::FourierField::random(gen, 2);
  const oracle::FourierField fw = oracle::FourierField::random(gen, 2);
  const Grid g = Grid::unit_square(63);
  const ScalarField u = sample(g, [&](double x, double y) { return fu(x, y); });
  const ScalarField w = sample(g, [&](double x, double y) { return fw(x, y); });
  const ScalarField br = vk_bracket(u, w);
  double worst = 0.0, scale = 0.0;
  for (int j = 2; j < g.ny() - 2; ++j)
    for (int i = 2; i < g.nx() - 2; ++i) {
      const double ref = oracle::bracket_of(fu, fw, g.x(i), g.y(j));
      worst = std::max(worst, std::abs(br(i, j) - ref));
      scale = std::max(scale, std::abs(ref));
    }
  CHECK(worst < 2e-2 * scale);  // second-order stencils at h = 1/64
}

TEST_CASE("discrete inner product approximates the continuum integral") {
  const Grid g = Grid::unit_square(63);
  const ScalarField s2 = sample(g, [](double x, double y) {
    return std::sin(oracle::pi * x) * std::sin(oracle::pi * y);
  });
  // integral of sin^2(pi x) sin^2(pi y) over the unit square is 1/4
  CHECK(inner(s2, s2) == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("biharmonic solve recovers a manufactured solution with a certificate") {
  const Grid g = Grid::unit_square(31);
  const ScalarField w = sample(g, [](double x, double y) {
    const double sx = std::sin(oracle::pi * x), sy = std::sin(oracle::pi * y);
    return sx * sx * sy * sy;
  });
  SolveReport rep;
  const ScalarField v = solve_bilaplacian(bilaplacian(w), 1e-10, &rep);
  CHECK(rep.relative_residual <= 1e-10);
  CHECK(rep.iterations > 0);
  CHECK(oracle::rel_l2_diff(v, w) < 1e-8);

  // the certificate is recomputed from the returned iterate
  ScalarField r = bilaplacian(v);
  r -= bilaplacian(w);
  CHECK(norm_l2(r) / norm_l2(bilaplacian(w)) <= 1.01e-10);
}

TEST_CASE("biharmonic solve handles edge inputs") {
  const Grid g = Grid::unit_square(15);
  const ScalarField zero(g);
  SolveReport rep;
  const ScalarField v = solve_bilaplacian(zero, 1e-10, &rep);
  for (std::size_t k = 0; k < v.size(); ++k) CHECK(v[k] == 0.0);
  CHECK(rep.iterations == 0);

  ScalarField bad(g);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(solve_bilaplacian(bad, 1e-10), DataError);
}

TEST_CASE("airy function symmetry and sign") {
  const Grid g = Grid::unit_square(21);
  std::mt19937_64 gen(17);
  const oracle::FourierField fa = oracle::FourierField::random(gen, 2);
  const oracle::FourierField fb = oracle::FourierField::random(gen, 2);
  const ScalarField a = sample(g, [&](double x, double y) { return fa(x, y); });
  const ScalarField b = sample(g, [&](double x, double y) { return fb(x, y); });

  const ScalarField vab = airy(a, b, 1e-11);
  const ScalarField vba = airy(b, a, 1e-11);
  CHECK(oracle::rel_l2_diff(vab, vba) < 1e-9);

  // <lap v, lap v> = -<[a,a], v> makes the quartic energy term nonnegative
  const ScalarField vaa = airy(a, a, 1e-11);
  const double lhs = inner(laplacian(vaa), laplacian(vaa));
  const double rhs = -inner(vk_bracket(a, a), vaa);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  CHECK(lhs >= 0.0);
}

TEST_CASE("shifted solve matches dense identity checks") {
  const Grid g = Grid::unit_square(15);
  std::mt19937_64 gen(23);
  const ScalarField b = noise_field(g, gen);
  const ScalarField x0(g);
  const double alpha = 2.0, beta = 0.3;
  SolveReport rep;
  const ScalarField x = solve_shifted_bilaplacian(alpha, beta, b, x0, 1e-12, &rep);
  ScalarField r = bilaplacian(x);
  r *= beta;
  axpy(r, alpha, x);
  r -= b;
  CHECK(norm_l2(r) / norm_l2(b) <= 1e-11);
}

TEST_CASE("norms scale and nest correctly") {
  const Grid g = Grid::unit_square(31);
  std::mt19937_64 gen(29);
  ScalarField a = noise_field(g, gen);
  const double l2 = norm_l2(a), h1 = norm_h1(a), h2 = norm_h2(a);
  CHECK(l2 > 0.0);
  CHECK(h1 >= l2);  // h1 adds the gradient part
  CHECK(h2 > 0.0);
  a *= -2.0;
  CHECK(norm_l2(a) == doctest::Approx(2.0 * l2).epsilon(1e-14));
  CHECK(norm_h2(a) == doctest::Approx(2.0 * h2).epsilon(1e-14));
}
