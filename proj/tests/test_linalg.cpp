#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "core/error.hpp"
#include "core/linalg.hpp"
#include "core/sym_matrix.hpp"
#include "support/oracles.hpp"

using namespace corrgen;

namespace {

SymMatrix random_symmetric(std::size_t p, unsigned seed, double scale = 1.0) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  SymMatrix a = SymMatrix::zeros(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) a.set(i, j, u(gen));
  return a;
}

SymMatrix reconstruct(const EigenDecomposition& e) {
  const std::size_t p = e.eigenvalues.size();
  SymMatrix out = SymMatrix::zeros(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < p; ++k)
        s += e.eigenvectors(i, k) * e.eigenvalues[k] * e.eigenvectors(j, k);
      out.set(i, j, s);
    }
  return out;
}

}  // namespace

TEST(Eigh, TwoByTwoClosedForm) {
  const double a = 0.3, b = -1.7, c = 0.45;
  const auto e = eigh(SymMatrix(2, {a, c, c, b}));
  const double mid = 0.5 * (a + b);
  const double rad = std::hypot(0.5 * (a - b), c);
  EXPECT_NEAR(e.eigenvalues[0], mid + rad, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1], mid - rad, 1e-14);
}

TEST(Eigh, TridiagonalToeplitzSpectrum) {
  const std::size_t n = 12;
  SymMatrix a = SymMatrix::zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.set(i, i, 2.0);
    if (i + 1 < n) a.set(i, i + 1, -1.0);
  }
  const auto e = eigh(a);
  for (std::size_t k = 0; k < n; ++k) {
    // Descending order: the largest is k = n.
    const double expected =
        2.0 - 2.0 * std::cos(static_cast<double>(n - k) * std::numbers::pi / (n + 1.0));
    EXPECT_NEAR(e.eigenvalues[k], expected, 1e-12);
  }
}

TEST(Eigh, ReconstructsAndIsOrthonormal) {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const auto a = random_symmetric(9 + seed, seed);
    const auto e = eigh(a);
    EXPECT_LT(oracle::frobenius_distance(reconstruct(e), a), 1e-11);
    const std::size_t p = a.dim();
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < p; ++k) dot += e.eigenvectors(k, i) * e.eigenvectors(k, j);
        EXPECT_NEAR(dot, i == j ? 1.0 : 0.0, 1e-12);
      }
    for (std::size_t k = 1; k < p; ++k) EXPECT_GE(e.eigenvalues[k - 1], e.eigenvalues[k]);
  }
}

TEST(Eigh, TraceAndDeterminantMatch) {
  const auto a = random_symmetric(5, 42);
  const auto e = eigh(a);
  double trace = 0.0, prod = 1.0, sum = 0.0;
  for (std::size_t i = 0; i < 5; ++i) trace += a(i, i);
  for (double l : e.eigenvalues) {
    sum += l;
    prod *= l;
  }
  EXPECT_NEAR(sum, trace, 1e-12);
  std::vector<double> dense(a.entries().begin(), a.entries().end());
  EXPECT_NEAR(prod, oracle::determinant(dense, 5), 1e-11);
}

TEST(Eigh, WarmStartMatchesColdStart) {
  const auto a = random_symmetric(15, 3);
  const auto cold = eigh(a);
  // A nearby matrix solved from the previous basis.
  SymMatrix b = a;
  b.set(2, 7, a(2, 7) + 1e-3);
  const auto warm = eigh_warm(b, cold.eigenvectors.transposed());
  const auto ref = eigh(b);
  for (std::size_t k = 0; k < 15; ++k) EXPECT_NEAR(warm.eigenvalues[k], ref.eigenvalues[k], 1e-12);
  EXPECT_LT(oracle::frobenius_distance(reconstruct(warm), b), 1e-11);
}

TEST(Eigh, RejectsNonFinite) {
  SymMatrix a = SymMatrix::identity(3);
  a.set(0, 1, std::nan(""));
  EXPECT_THROW(eigh(a), Error);
}

TEST(ProjectPsd, IsIdentityOnPsdInput) {
  const SymMatrix a(3, {2.0, 0.5, 0.0, 0.5, 1.0, 0.2, 0.0, 0.2, 1.5});
  EXPECT_LT(oracle::frobenius_distance(project_psd(a), a), 1e-13);
}

TEST(ProjectPsd, ClosedFormTwoByTwo) {
  // eigenvalues 1 +- 2 with vectors (1, +-1)/sqrt2: keep only 3.
  const auto p = project_psd(SymMatrix(2, {1.0, 2.0, 2.0, 1.0}));
  for (double v : p.entries()) EXPECT_NEAR(v, 1.5, 1e-14);
}

TEST(ProjectPsd, VariationalInequality) {
  // P = proj(A) iff P is PSD, A - P is NSD and <A - P, P> = 0.
  for (unsigned seed = 10; seed < 16; ++seed) {
    const auto a = random_symmetric(8, seed);
    const auto p = project_psd(a);
    EXPECT_GE(min_eigenvalue(p), -1e-12);
    const SymMatrix r = a - p;
    EXPECT_LE(-min_eigenvalue(-1.0 * r), 1e-12);
    double inner = 0.0;
    for (std::size_t k = 0; k < r.entries().size(); ++k) inner += r.entries()[k] * p.entries()[k];
    EXPECT_NEAR(inner, 0.0, 1e-11);
  }
}

TEST(ProjectPsd, NoCloserPsdMatrixAmongRandomCandidates) {
  const auto a = random_symmetric(6, 77);
  const auto p = project_psd(a);
  const double best = oracle::frobenius_distance(a, p);
  std::mt19937 gen(5);
  std::normal_distribution<double> n(0.0, 0.3);
  for (int trial = 0; trial < 200; ++trial) {
    SymMatrix q = p;
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i; j < 6; ++j) q.set(i, j, q(i, j) + n(gen));
    q = project_psd(q);  // any PSD candidate
    EXPECT_GE(oracle::frobenius_distance(a, q), best - 1e-12);
  }
}

TEST(Cholesky, FactorReproducesMatrix) {
  const SymMatrix a(3, {4.0, 2.0, 0.6, 2.0, 2.0, 0.5, 0.6, 0.5, 3.0});
  const Dense l = cholesky(a);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      if (j > i) {
        EXPECT_EQ(l(i, j), 0.0);
      }
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += l(i, k) * l(j, k);
      EXPECT_NEAR(s, a(i, j), 1e-14);
    }
}

TEST(Cholesky, RejectsIndefinite) {
  try {
    cholesky(SymMatrix(2, {1.0, 2.0, 2.0, 1.0}));
    FAIL() << "expected NotPositiveDefinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
  }
}

TEST(Frobenius, MatchesDirectLoop) {
  const auto a = random_symmetric(7, 1);
  const auto b = random_symmetric(7, 2);
  EXPECT_NEAR(frobenius_distance(a, b), oracle::frobenius_distance(a, b), 1e-13);
  EXPECT_EQ(frobenius_distance(a, a), 0.0);
  EXPECT_THROW(frobenius_distance(a, SymMatrix::identity(3)), Error);
}

TEST(SymMatrix, ConstructorSymmetrizes) {
  const SymMatrix a(2, {1.0, 0.2, 0.4, 1.0});
  EXPECT_DOUBLE_EQ(a(0, 1), a(1, 0));
  EXPECT_NEAR(a(0, 1), 0.3, 1e-15);
}

TEST(SymMatrix, CsvRoundTripIsExact) {
  const auto a = random_symmetric(6, 9);
  std::stringstream ss;
  write_matrix_csv(ss, a);
  EXPECT_EQ(read_matrix_csv(ss), a);
}

TEST(SymMatrix, CsvRejectsBadInput) {
  std::stringstream ragged("1,0\n0\n");
  EXPECT_THROW(read_matrix_csv(ragged), Error);
  std::stringstream asym("1,0.5\n0.1,1\n");
  EXPECT_THROW(read_matrix_csv(asym), Error);
  std::stringstream text("1,x\nx,1\n");
  EXPECT_THROW(read_matrix_csv(text), Error);
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.1, -2.5e-17, 1.0 / 3.0, 123456789.125, -0.0}) {
    const auto s = format_double(v);
    EXPECT_EQ(std::stod(s), v) << s;
  }
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(0.5), "0.5");
}
