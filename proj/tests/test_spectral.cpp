#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "shockstab.hpp"

using namespace shockstab;
using Catch::Approx;

TEST_CASE("burgers spectral data is scalar", "[spectral]") {
  const SystemModel m = catalog_lookup("burgers");
  Vec u(1);
  u << 3.0;
  const SpectralData sd = eigen_decompose(m, u);
  REQUIRE(sd.eigenvalues.size() == 1);
  CHECK(sd.eigenvalues[0] == Approx(3.0).margin(1e-14));
  CHECK(sd.eigenvectors(0, 0) == Approx(1.0).margin(1e-14));
}

TEST_CASE("p-system eigenstructure at v=0.5 matches the hand solve", "[spectral]") {
  const SystemModel m = catalog_lookup("p_system", {{"k", 1.0}, {"gamma", 2.0}});
  Vec s(2);
  s << 0.5, -0.5 * std::sqrt(6.0);

  // A = [[0,-1],[-16,0]]
  const Mat a = m.jacobian(s);
  CHECK(a(0, 1) == Approx(-1.0).margin(1e-15));
  CHECK(a(1, 0) == Approx(-16.0).margin(1e-12));

  const SpectralData sd = eigen_decompose(m, s);
  CHECK(sd.eigenvalues[0] == Approx(-4.0).margin(1e-12));
  CHECK(sd.eigenvalues[1] == Approx(4.0).margin(1e-12));

  // r_1 ~ (1, 4), r_2 ~ (1, -4); P = diag(16, 1)
  CHECK(sd.eigenvectors(1, 0) / sd.eigenvectors(0, 0) == Approx(4.0).margin(1e-10));
  CHECK(sd.eigenvectors(1, 1) / sd.eigenvectors(0, 1) == Approx(-4.0).margin(1e-10));

  const Mat p = m.entropy_hessian(s);
  CHECK(p(0, 0) == Approx(16.0).margin(1e-12));
  CHECK(p(1, 1) == Approx(1.0).margin(1e-15));
  const double cross = sd.eigenvectors.col(0).dot(p * sd.eigenvectors.col(1));
  CHECK(std::abs(cross) < 1e-12);
}

TEST_CASE("euler characteristic speeds at the reference state", "[spectral]") {
  const SystemModel m = catalog_lookup("euler_ideal", {{"gamma", 1.4}});
  Vec u(3);
  u << 1.0, 0.0, 2.5;  // rho=1, u=0, p=1
  const SpectralData sd = eigen_decompose(m, u);
  const double c = std::sqrt(1.4);
  CHECK(sd.eigenvalues[0] == Approx(-c).margin(1e-10));
  CHECK(std::abs(sd.eigenvalues[1]) < 1e-12);
  CHECK(sd.eigenvalues[2] == Approx(c).margin(1e-10));
}

TEST_CASE("decompositions are P-orthonormal and reconstruct A", "[spectral][property]") {
  std::mt19937_64 rng(801);
  for (const std::string& name : catalog_names()) {
    const SystemModel m = catalog_lookup(name);
    for (int trial = 0; trial < 50; ++trial) {
      const Vec u = testutil::random_state(name, rng);
      const SpectralData sd = eigen_decompose(m, u);
      const Mat p = m.entropy_hessian(u);
      const Mat a = m.jacobian(u);
      const Mat& r = sd.eigenvectors;

      const Mat gram = r.transpose() * p * r;
      CHECK((gram - Mat::Identity(m.n, m.n)).cwiseAbs().maxCoeff() < 1e-10);

      const Mat reconstructed = r * sd.eigenvalues.asDiagonal() * r.inverse();
      CHECK((reconstructed - a).norm() <= 1e-9 * std::max(1.0, a.norm()));

      for (Eigen::Index j = 0; j + 1 < sd.eigenvalues.size(); ++j)
        CHECK(sd.eigenvalues[j] < sd.eigenvalues[j + 1]);
      for (Eigen::Index j = 0; j < sd.eigenvalues.size(); ++j)
        CHECK((a * r.col(j) - sd.eigenvalues[j] * r.col(j)).norm() <=
              1e-10 * std::max(1.0, a.norm()));
    }
  }
}

TEST_CASE("symmetrized problem is symmetric to rounding", "[spectral]") {
  const SystemModel m = catalog_lookup("p_system");
  Vec u(2);
  u << 0.7, -0.3;
  const SymmetrizedProblem sp = make_symmetrized(m, u);
  CHECK(sp.symmetry_residual < 1e-13);
  CHECK((sp.cholesky_factor * sp.cholesky_factor.transpose() - sp.symmetrizer).norm() <
        1e-12 * sp.symmetrizer.norm());
}

namespace {

SystemModel indefinite_entropy_model() {
  SystemModel m;
  m.name = "indefinite";
  m.n = 2;
  m.flux = [](const Vec& u) { return u; };
  m.jacobian = [](const Vec&) { return Mat::Identity(2, 2); };
  m.entropy = [](const Vec& u) { return u[0] * u[0] + u[0] * u[1]; };
  m.entropy_gradient = [](const Vec& u) {
    Vec g(2);
    g << 2.0 * u[0] + u[1], u[0];
    return g;
  };
  m.entropy_hessian = [](const Vec&) {
    Mat p(2, 2);
    p << 2.0, 1.0, 1.0, 0.0;
    return p;
  };
  return m;
}

SystemModel repeated_eigenvalue_model() {
  SystemModel m;
  m.name = "identity_flux";
  m.n = 2;
  m.flux = [](const Vec& u) { return u; };
  m.jacobian = [](const Vec&) { return Mat::Identity(2, 2); };
  m.entropy = [](const Vec& u) { return 0.5 * u.squaredNorm(); };
  m.entropy_gradient = [](const Vec& u) { return u; };
  m.entropy_hessian = [](const Vec&) { return Mat::Identity(2, 2); };
  return m;
}

}  // namespace

TEST_CASE("indefinite entropy Hessian is rejected", "[spectral][errors]") {
  Vec u(2);
  u << 1.0, 1.0;
  CHECK_THROWS_MATCHES(eigen_decompose(indefinite_entropy_model(), u), SpectralError,
                       Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring(
                           "not positive definite")));
}

TEST_CASE("repeated eigenvalues violate strict hyperbolicity", "[spectral][errors]") {
  Vec u(2);
  u << 0.2, 0.4;
  CHECK_THROWS_MATCHES(eigen_decompose(repeated_eigenvalue_model(), u), SpectralError,
                       Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring(
                           "strict hyperbolicity violated")));
}

TEST_CASE("shifted solve reproduces known answers", "[spectral]") {
  SECTION("shift zero returns the preimage") {
    const SystemModel m = catalog_lookup("p_system");
    Vec u(2);
    u << 1.3, 0.4;
    std::mt19937_64 rng(802);
    Vec w(2);
    w << testutil::uniform(rng, -1, 1), testutil::uniform(rng, -1, 1);
    const Vec rhs = m.jacobian(u) * w;
    const Vec x = solve_shifted(m, u, 0.0, rhs);
    CHECK((x - w).norm() < 1e-12 * std::max(1.0, w.norm()));
  }
  SECTION("p-system shock shift") {
    const SystemModel m = catalog_lookup("p_system", {{"k", 1.0}, {"gamma", 2.0}});
    Vec s(2);
    s << 0.5, -0.5 * std::sqrt(6.0);
    Vec rhs(2);
    rhs << 1.0, 0.0;
    const double sigma = -std::sqrt(6.0);
    const Vec x = solve_shifted(m, s, sigma, rhs);
    const Mat a = m.jacobian(s);
    const Vec back = (a - sigma * Mat::Identity(2, 2)) * x;
    CHECK((back - rhs).norm() <= 1e-10 * (a.norm() + std::abs(sigma)) *
                                     std::max(1.0, x.norm()));
  }
  SECTION("scalar") {
    const SystemModel m = catalog_lookup("burgers");
    Vec u(1);
    u << 1.0;
    Vec rhs(1);
    rhs << 2.0;
    const Vec x = solve_shifted(m, u, 0.5, rhs);
    CHECK(x[0] == Approx(4.0).margin(1e-12));
  }
  SECTION("resonant shift is refused") {
    const SystemModel m = catalog_lookup("burgers");
    Vec u(1);
    u << 1.0;
    Vec rhs(1);
    rhs << 1.0;
    CHECK_THROWS_MATCHES(solve_shifted(m, u, 1.0, rhs), SpectralError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("resonant")));
  }
}

TEST_CASE("normalized determinant basics", "[spectral]") {
  SECTION("identity columns") {
    CHECK(normalized_determinant(Mat::Identity(3, 3), Mat::Identity(3, 3)) ==
          Approx(1.0).margin(1e-14));
  }
  SECTION("column scaling is irrelevant") {
    std::mt19937_64 rng(803);
    for (int trial = 0; trial < 20; ++trial) {
      Mat cols(3, 3), l = Mat::Zero(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          cols(i, j) = testutil::uniform(rng, -1, 1);
          if (j <= i) l(i, j) = testutil::uniform(rng, -1, 1);
        }
      const Mat weights = l * l.transpose() + Mat::Identity(3, 3);
      const double base = normalized_determinant(cols, weights);
      Mat scaled = cols;
      scaled.col(trial % 3) *= 10.0;
      CHECK(normalized_determinant(scaled, weights) == Approx(base).margin(1e-12));
    }
  }
  SECTION("zero column is degenerate, not merely singular") {
    Mat cols = Mat::Identity(2, 2);
    cols.col(1).setZero();
    CHECK_THROWS_MATCHES(normalized_determinant(cols, Mat::Identity(2, 2)), SpectralError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("degenerate column")));
  }
  SECTION("p-system shock columns against the hand value") {
    // columns (S-u) = (-1/2, -sqrt(6)/2) and r_2 ~ (1,-4), P = diag(16,1) at S
    const double det_raw = 2.0 + 0.5 * std::sqrt(6.0);              // 3.2247...
    const double n1 = std::sqrt(16.0 * 0.25 + 6.0 / 4.0);           // sqrt(5.5)
    const double n2 = std::sqrt(32.0);
    const double oracle = det_raw / (n1 * n2);                      // 0.24307...

    Mat cols(2, 2);
    cols << -0.5, 1.0, -0.5 * std::sqrt(6.0), -4.0;
    Mat p = Mat::Zero(2, 2);
    p(0, 0) = 16.0;
    p(1, 1) = 1.0;
    CHECK(normalized_determinant(cols, p) == Approx(oracle).epsilon(1e-12));
  }
}
