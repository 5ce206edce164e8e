#include <doctest.h>

#include <cmath>

#include "chanbound/errors.hpp"
#include "chanbound/extended_real.hpp"
#include "chanbound/linalg.hpp"
#include "chanbound/oracle.hpp"

using namespace chanbound;

namespace {

Matrix random_hermitian(std::size_t n, SeededSampler& s) {
  const auto N = static_cast<Eigen::Index>(n);
  Matrix a(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) a(i, j) = Complex(s.normal(), s.normal());
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_CASE("extended reals order and add with tags") {
  const auto inf = ExtendedReal::pos_inf();
  const auto ninf = ExtendedReal::neg_inf();
  CHECK(ninf < ExtendedReal(-1e300));
  CHECK(ExtendedReal(1e300) < inf);
  CHECK((inf + ExtendedReal(3.0)).is_pos_inf());
  CHECK((ExtendedReal(2.0) - inf).is_neg_inf());
  CHECK((-ninf).is_pos_inf());
  CHECK_THROWS_AS(inf + ninf, std::domain_error);
  CHECK(inf.to_string() == "inf");
  CHECK(ninf.to_string() == "-inf");
  CHECK(ExtendedReal(0.1).to_string() == "0.1");
  CHECK(ExtendedReal::from_double(-HUGE_VAL).is_neg_inf());
}

TEST_CASE("spectral vectors sort descending and validate states") {
  const SpectralVector v{0.1, 0.6, 0.3};
  CHECK(v[0] == 0.6);
  CHECK(v[2] == 0.1);
  CHECK(v.ascending() == RealVector{0.1, 0.3, 0.6});
  CHECK_THROWS_AS(SpectralVector::state({0.5, 0.6}), InvalidStateError);
  CHECK_THROWS_AS(SpectralVector::state({1.2, -0.2}), InvalidStateError);
  CHECK(SpectralVector::state({1.0 + 1e-12, -1e-12})[1] == 0.0);
}

TEST_CASE("spectral_decompose on small cases") {
  SUBCASE("diagonal input keeps the standard basis") {
    const auto sd = spectral_decompose(HermitianMatrix::diagonal(RealVector{0.5, 0.5}));
    CHECK(sd.eigenvalues == SpectralVector{0.5, 0.5});
    CHECK((sd.basis - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("rank-one projector") {
    Matrix m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    const auto sd = spectral_decompose(m);
    CHECK(sd.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(sd.eigenvalues[1]) < 1e-14);
  }
  SUBCASE("random Hermitian reconstructs") {
    SeededSampler s(11);
    for (int rep = 0; rep < 20; ++rep) {
      const Matrix a = random_hermitian(5, s);
      const auto sd = spectral_decompose(a);
      CHECK((sd.reconstruct() - a).cwiseAbs().maxCoeff() < 1e-10);
      const Matrix id = sd.basis.adjoint() * sd.basis;
      CHECK((id - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
      for (std::size_t i = 0; i + 1 < 5; ++i) CHECK(sd.eigenvalues[i] >= sd.eigenvalues[i + 1]);
    }
  }
  SUBCASE("non-Hermitian input is rejected") {
    Matrix m(2, 2);
    m << 0.5, 0.1, 0.2, 0.5;
    CHECK_THROWS_AS(spectral_decompose(m), SymmetryError);
  }
}

TEST_CASE("density matrix invariants") {
  CHECK_THROWS_AS(DensityMatrix::diagonal({0.5, 0.6}), InvalidStateError);
  CHECK_THROWS_AS(DensityMatrix::diagonal({1.1, -0.1}), InvalidStateError);
  Matrix m(2, 2);
  m << 0.5, Complex(0, 0.1), Complex(0, 0.1), 0.5;
  CHECK_THROWS_AS(DensityMatrix{m}, SymmetryError);
  const auto rho = DensityMatrix::diagonal({0.2, 0.8});
  CHECK(rho.eigenvalues() == SpectralVector{0.8, 0.2});
}

TEST_CASE("matrix_function") {
  SeededSampler s(3);
  const DensityMatrix rho = random_state(4, s, 4);
  const Matrix id = matrix_function(rho, [](double x) { return x; }).matrix();
  CHECK((id - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);

  const Matrix r = matrix_function(rho, [](double x) { return std::sqrt(x); }).matrix();
  CHECK((r * r - rho.matrix()).cwiseAbs().maxCoeff() < 1e-9);

  const Matrix d = matrix_function(DensityMatrix::diagonal({0.25, 0.75}),
                                   [](double x) { return std::sqrt(x); }).matrix();
  CHECK(d(0, 0).real() == doctest::Approx(0.5));
  CHECK(d(1, 1).real() == doctest::Approx(std::sqrt(0.75)));

  try {
    matrix_function(DensityMatrix::diagonal({1.0, 0.0}), [](double x) { return std::log(x); });
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.eigenvalue() == 0.0);
  }
}

TEST_CASE("schatten norms") {
  const auto h = HermitianMatrix::diagonal(RealVector{0.3, -0.3});
  CHECK(schatten_norm(h, 1.0) == doctest::Approx(0.6));
  CHECK(schatten_norm(h, 2.0) == doctest::Approx(0.3 * std::sqrt(2.0)));
  CHECK(schatten_norm(h, HUGE_VAL) == doctest::Approx(0.3));
  CHECK_THROWS_AS(schatten_norm(h, 0.5), ParameterError);

  SeededSampler s(5);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix a = random_hermitian(4, s);
    double sv = 0.0;
    for (double x : singular_values(a)) sv += x;
    CHECK(schatten_norm(HermitianMatrix(a), 1.0) == doctest::Approx(sv).epsilon(1e-12));
  }
}

TEST_CASE("fidelity") {
  SeededSampler s(8);
  const DensityMatrix rho = random_state(3, s);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(DensityMatrix::diagonal({1, 0}), DensityMatrix::diagonal({0, 1})) == doctest::Approx(0.0));

  const double expected = std::sqrt(0.2) + 2 * std::sqrt(0.06);
  CHECK(fidelity(DensityMatrix::diagonal({.4, .3, .3, 0}), DensityMatrix::diagonal({.5, .2, .2, .1})) ==
        doctest::Approx(expected).epsilon(1e-12));

  // Pure states: F = |<psi|phi>|.
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix u = haar_unitary(3, s);
    const Eigen::VectorXcd psi = u.col(0);
    const Eigen::VectorXcd phi = haar_unitary(3, s).col(0);
    const DensityMatrix a{Matrix(psi * psi.adjoint())};
    const DensityMatrix b{Matrix(phi * phi.adjoint())};
    CHECK(fidelity(a, b) == doctest::Approx(std::abs(psi.dot(phi))).epsilon(1e-9));
  }
}

TEST_CASE("relative entropy") {
  SeededSampler s(9);
  const DensityMatrix rho = random_state(4, s);
  CHECK(relative_entropy(rho, rho).value() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(relative_entropy(DensityMatrix::diagonal({1, 0}), DensityMatrix::diagonal({0, 1})).is_pos_inf());

  const auto v = relative_entropy(DensityMatrix::diagonal({.4, .3, .3, 0}),
                                  DensityMatrix::diagonal({.36, .27, .27, .1}));
  CHECK(v.value() == doctest::Approx(std::log(10.0 / 9.0)).epsilon(1e-12));

  // Commuting states reduce to the classical divergence, also in a rotated frame.
  const Matrix u = haar_unitary(3, s);
  const RealVector p{0.5, 0.3, 0.2}, q{0.2, 0.2, 0.6};
  double kl = 0.0;
  for (int i = 0; i < 3; ++i) kl += p[i] * std::log(p[i] / q[i]);
  const auto rot = relative_entropy(DensityMatrix::from_spectrum(p, u), DensityMatrix::from_spectrum(q, u));
  CHECK(rot.value() == doctest::Approx(kl).epsilon(1e-10));
}

TEST_CASE("distances") {
  const auto a = DensityMatrix::diagonal({0.7, 0.3});
  const auto b = DensityMatrix::diagonal({0.2, 0.8});
  CHECK(trace_distance(a, b) == doctest::Approx(0.5));
  CHECK(hs_distance(a, b) == doctest::Approx(0.5 * std::sqrt(2.0)));
  CHECK(bures_distance(a, a) < 1e-7);
  CHECK(bures_from_fidelity(0.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(trace_distance(a, DensityMatrix::diagonal({1, 0, 0})), ParameterError);
}
