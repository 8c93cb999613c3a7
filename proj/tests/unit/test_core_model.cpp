#include <cmath>

#include "doctest.h"
#include "uio/errors.hpp"
#include "uio/linalg.hpp"
#include "uio/plant.hpp"
#include "uio/sector.hpp"

using namespace uio;

namespace {

SectorBound scalar_bound(double u1, double u2) {
  SectorBound b;
  b.U1 = Matrix::Constant(1, 1, u1);
  b.U2 = Matrix::Constant(1, 1, u2);
  return b;
}

}  // namespace

TEST_CASE("sector matrix for the scalar bound (0, 1/2)") {
  Matrix m = build_sector_matrix(scalar_bound(0.0, 0.5));
  REQUIRE(m.rows() == 2);
  CHECK(m(0, 0) == doctest::Approx(0.0));
  CHECK(m(0, 1) == doctest::Approx(0.5));
  CHECK(m(1, 0) == doctest::Approx(0.5));
  CHECK(m(1, 1) == doctest::Approx(-1.0));
}

TEST_CASE("sector matrix for the scalar bound (1, 2)") {
  Matrix m = build_sector_matrix(scalar_bound(1.0, 2.0));
  CHECK(m(0, 0) == doctest::Approx(-4.0));
  CHECK(m(0, 1) == doctest::Approx(3.0));
  CHECK(m(1, 1) == doctest::Approx(-1.0));
}

TEST_CASE("sector matrix blocks in higher dimension") {
  SectorBound b;
  b.U1 = Matrix::Zero(2, 2);
  b.U1 << 0.1, 0.0, 0.0, 0.2;
  b.U2 = Matrix::Identity(2, 2) * 2.0;
  Matrix m = build_sector_matrix(b);
  REQUIRE(m.rows() == 4);
  CHECK(max_abs(m.topLeftCorner(2, 2) - (-(b.U1 * b.U2 + b.U2 * b.U1))) < 1e-14);
  CHECK(max_abs(m.topRightCorner(2, 2) - (b.U1 + b.U2)) < 1e-14);
  CHECK(max_abs(m.bottomRightCorner(2, 2) + Matrix::Identity(2, 2)) < 1e-14);
  CHECK(max_abs(m - m.transpose()) == 0.0);
}

TEST_CASE("tanh with bound (0, 1/2) satisfies the incremental sector form") {
  auto spec = make_tanh_nonlinearity(Matrix::Zero(1, 1), Matrix::Constant(1, 1, 0.5));
  SectorValidation v = validate_sector_bound(spec);
  CHECK(v.ok);
  CHECK(v.min_value >= -1e-12);
}

TEST_CASE("identity map passes its own sector bound") {
  SectorBound b = scalar_bound(0.5, 1.5);
  auto spec = make_custom_nonlinearity("identity", [](const Vector& y) { return y; }, b);
  SectorValidation v = validate_sector_bound(spec);
  CHECK(v.ok);
  CHECK(v.min_value >= -1e-12);
}

TEST_CASE("a nonlinearity outside the sector is rejected with a witness") {
  // slope 1.5 against a bound that admits slopes in [0, 1]
  auto spec = make_custom_nonlinearity(
      "steep", [](const Vector& y) { return Vector(1.5 * y); }, scalar_bound(0.0, 0.5));
  SectorValidation v = validate_sector_bound(spec);
  CHECK_FALSE(v.ok);
  CHECK(v.min_value < 0.0);
  // the recorded witness pair reproduces the violation
  Vector ra = spec.f(v.worst_a), rb = spec.f(v.worst_b);
  Vector d = v.worst_a - v.worst_b, r = ra - rb;
  Matrix m = build_sector_matrix(spec.bound);
  Vector stacked(2);
  stacked << d(0), r(0);
  CHECK(stacked.dot(m * stacked) == doctest::Approx(v.min_value));
}

TEST_CASE("zero nonlinearity validates trivially") {
  auto spec = make_zero_nonlinearity(2);
  CHECK(spec.f(Vector::Ones(2)).norm() == 0.0);
  CHECK(validate_sector_bound(spec).ok);
}

TEST_CASE("Lipschitz constant from the sector data") {
  SUBCASE("scalar (0, 1/2) gives 2") {
    CHECK(lipschitz_constant(scalar_bound(0.0, 0.5)) == doctest::Approx(2.0));
  }
  SUBCASE("matrix (I, 2I) gives 32/5") {
    SectorBound b;
    b.U1 = Matrix::Identity(3, 3);
    b.U2 = 2.0 * Matrix::Identity(3, 3);
    CHECK(lipschitz_constant(b) == doctest::Approx(32.0 / 5.0));
  }
}

TEST_CASE("source increment respects the Lipschitz bound") {
  auto spec = make_tanh_nonlinearity(Matrix::Zero(1, 1), Matrix::Constant(1, 1, 0.5));
  const double ell = lipschitz_constant(spec.bound);
  Matrix T(1, 2);
  T << 1.0, -0.5;
  Vector x(2), eps(2);
  int probe = 0;
  for (double a : {-2.0, -0.3, 0.0, 1.7}) {
    for (double b : {-1.0, 0.4, 2.2}) {
      x << a, b;
      eps << std::sin(3.0 * ++probe), std::cos(5.0 * probe);
      Vector rho = evaluate_rho(spec, T, x, eps);
      CHECK(rho.norm() <= ell * (T * eps).norm() + 1e-14);
    }
  }
}

TEST_CASE("rho matches a direct evaluation") {
  auto spec = make_tanh_nonlinearity(Matrix::Zero(1, 1), Matrix::Constant(1, 1, 0.5));
  Matrix T(1, 2);
  T << 2.0, 1.0;
  Vector x(2), eps(2);
  x << 0.3, -0.2;
  eps << 0.1, 0.25;
  Vector rho = evaluate_rho(spec, T, x, eps);
  double expected = std::tanh((T * x)(0)) - std::tanh((T * (x - eps))(0));
  CHECK(rho(0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("sector bound validation rejects malformed data") {
  SectorBound bad;
  bad.U1 = Matrix::Zero(2, 1);
  bad.U2 = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  SectorBound negative = scalar_bound(-0.5, 1.0);  // U1 must stay psd
  CHECK_THROWS_AS(negative.validate(), ValidationError);

  SectorBound flipped = scalar_bound(1.0, 0.5);  // U2 - U1 must be pd
  CHECK_THROWS_AS(flipped.validate(), ValidationError);

  CHECK_NOTHROW(scalar_bound(0.0, 0.5).validate());
}

TEST_CASE("LambdaField evaluators") {
  SUBCASE("closed form") {
    auto f = LambdaField::from_function(2, [](double z) {
      Vector v(2);
      v << 1.0 + z * z, std::exp(-z);
      return v;
    });
    CHECK(f.size() == 2);
    CHECK(f.diag_at(0.5)(0) == doctest::Approx(1.25));
    CHECK(f.diag_at(1.0)(1) == doctest::Approx(std::exp(-1.0)));
    CHECK(f.max_entry() == doctest::Approx(2.0));
  }
  SUBCASE("constant") {
    Vector d(2);
    d << std::sqrt(2.0), 2.0;
    auto f = LambdaField::from_constant(d);
    CHECK(f.diag_at(0.3)(0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(f.max_entry() == doctest::Approx(2.0));
  }
  SUBCASE("sampled table interpolates and clamps") {
    const int K = 201;
    Vector z(K);
    Matrix vals(K, 1);
    for (int i = 0; i < K; ++i) {
      z(i) = static_cast<double>(i) / (K - 1);
      vals(i, 0) = 1.0 + z(i);
    }
    auto f = LambdaField::from_samples(z, vals);
    CHECK(f.diag_at(0.5)(0) == doctest::Approx(1.5));
    CHECK(f.diag_at(0.3217)(0) == doctest::Approx(1.3217).epsilon(1e-9));
    CHECK(f.diag_at(-1.0)(0) == doctest::Approx(1.0));  // clamped
    CHECK(f.diag_at(2.0)(0) == doctest::Approx(2.0));
  }
  SUBCASE("sampled table rejects sparse or partial grids") {
    Vector z = Vector::LinSpaced(50, 0.0, 1.0);
    Matrix vals = Matrix::Ones(50, 1);
    CHECK_THROWS_AS(LambdaField::from_samples(z, vals), ValidationError);
    Vector z2 = Vector::LinSpaced(150, 0.0, 0.9);  // misses the outflow end
    Matrix vals2 = Matrix::Ones(150, 1);
    CHECK_THROWS_AS(LambdaField::from_samples(z2, vals2), ValidationError);
  }
}

namespace {

PlantSpec tiny_plant() {
  PlantSpec p;
  p.Lambda = LambdaField::from_constant(Vector::Ones(2));
  p.M = Matrix::Zero(2, 3);
  p.M << 1, 1, 1, 0, 1, 0;
  p.A = Matrix::Zero(3, 3);
  p.A << 0, 1, 0, -1, 0, 0, 0, 0, 0;
  p.B = Matrix::Zero(3, 1);
  p.E = Matrix::Zero(3, 1);
  p.E << 0, 1, 1;
  p.C = Matrix::Zero(1, 2);
  p.C << 1, 1;
  p.N = Matrix::Identity(2, 2);
  p.S = Matrix::Zero(2, 1);
  p.S << 1, 0;
  p.T = Matrix::Zero(1, 2);
  p.T << 1, 0;
  p.nonlinearity =
      make_tanh_nonlinearity(Matrix::Zero(1, 1), Matrix::Constant(1, 1, 0.5));
  return p;
}

}  // namespace

TEST_CASE("plant validation accepts a consistent system") {
  CHECK_NOTHROW(tiny_plant().validate());
  PlantSpec p = tiny_plant();
  CHECK(p.nx() == 2);
  CHECK(p.nchi() == 3);
  CHECK(p.nw() == 1);
  CHECK(p.ny1() == 1);
  CHECK(p.ny2() == 2);
  CHECK(p.coefficient_scale() >= 1.0);
}

TEST_CASE("plant validation names the broken condition") {
  SUBCASE("M rows vs transport dimension") {
    PlantSpec p = tiny_plant();
    p.M = Matrix::Ones(3, 3);
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("C columns vs field dimension") {
    PlantSpec p = tiny_plant();
    p.C = Matrix::Ones(1, 3);
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("nonsquare A") {
    PlantSpec p = tiny_plant();
    p.A = Matrix::Ones(3, 2);
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("sector dimension vs T rows") {
    PlantSpec p = tiny_plant();
    p.T = Matrix::Ones(2, 2);
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("transport speed crossing zero") {
    PlantSpec p = tiny_plant();
    p.Lambda = LambdaField::from_function(2, [](double z) {
      Vector v(2);
      v << 1.0, 0.5 - z;  // negative past z = 1/2
      return v;
    });
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
}
