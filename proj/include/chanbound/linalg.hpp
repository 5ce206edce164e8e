#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chanbound/extended_real.hpp"

namespace chanbound {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = std::vector<double>;

/// Relative tolerance on |A - A†| entries.
inline constexpr double kHermitianTolerance = 1e-12;
/// Eigenvalue tolerance for PSD / trace / support checks on states.
inline constexpr double kEigenTolerance = 1e-10;
/// Eigenvalues of magnitude below this are rounding noise and are snapped to
/// zero before a scalar map is applied (sqrt amplifies 1e-17 into 3e-9).
inline constexpr double kRoundingFloor = 1e-14;

/// Real eigenvalue list kept in descending order. The same type carries
/// λ(X), the rows of Λ↓ / Λ↑ and points of the simplex Ω_n.
class SpectralVector {
 public:
  SpectralVector() = default;
  /// Sorts the input descending.
  explicit SpectralVector(RealVector values);
  SpectralVector(std::initializer_list<double> values)
      : SpectralVector(RealVector(values)) {}

  /// Like the plain constructor, but additionally requires membership in
  /// Ω_n (entries ≥ −1e−10, sum 1 ± 1e−10); small negatives are clamped.
  /// Throws InvalidStateError.
  static SpectralVector state(RealVector values);

  std::span<const double> values() const { return values_; }
  const RealVector& vector() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double sum() const;

  /// Same entries, ascending (the diagonal of Λ↑).
  RealVector ascending() const;
  bool in_simplex(double tol = kEigenTolerance) const;

  friend bool operator==(const SpectralVector&, const SpectralVector&) = default;

 private:
  RealVector values_;
};

/// A = basis · diag(eigenvalues) · basis†, eigenvalues descending and the
/// basis columns ordered to match.
struct SpectralDecomposition {
  SpectralVector eigenvalues;
  Matrix basis;

  Matrix reconstruct() const;
};

/// Complex Hermitian matrix (validated on construction).
class HermitianMatrix {
 public:
  /// Throws SymmetryError when |A[i][j] − conj(A[j][i])| exceeds
  /// 1e−12 · max(1, max|A|). The stored matrix is the exact Hermitian part.
  explicit HermitianMatrix(const Matrix& m);
  static HermitianMatrix diagonal(std::span<const double> d);

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

/// Positive semidefinite, trace-one Hermitian matrix. The spectral
/// decomposition is computed once at construction and cached.
class DensityMatrix {
 public:
  /// Throws SymmetryError or InvalidStateError.
  explicit DensityMatrix(const Matrix& m);
  explicit DensityMatrix(const HermitianMatrix& h);

  /// diag(values) in the standard basis.
  static DensityMatrix diagonal(std::span<const double> values);
  static DensityMatrix diagonal(std::initializer_list<double> values);
  /// basis · diag(values) · basis†.
  static DensityMatrix from_spectrum(std::span<const double> values, const Matrix& basis);

  const Matrix& matrix() const { return h_.matrix(); }
  const HermitianMatrix& hermitian() const { return h_; }
  Eigen::Index dim() const { return h_.dim(); }

  /// Eigenvalues (descending, negatives clamped to 0) and eigenbasis.
  const SpectralDecomposition& spectrum() const { return spectrum_; }
  const SpectralVector& eigenvalues() const { return spectrum_.eigenvalues; }
  const Matrix& eigenbasis() const { return spectrum_.basis; }

 private:
  HermitianMatrix h_;
  SpectralDecomposition spectrum_;
};

/// True when A is Hermitian within kHermitianTolerance · max(1, max|A|).
bool is_hermitian(const Matrix& a);

/// Eigen-decomposition with eigenvalues descending. Each eigenvector is
/// phase-fixed so that its first largest-modulus entry is real positive.
SpectralDecomposition spectral_decompose(const HermitianMatrix& a);
/// Validates first; throws SymmetryError.
SpectralDecomposition spectral_decompose(const Matrix& a);

/// basis · diag(values) · basis†.
Matrix from_eigen(const Matrix& basis, std::span<const double> values);

using ScalarMap = std::function<double(double)>;

/// f(ρ) = U diag(f(μ_j)) U†. Eigenvalues are clamped into [0, 1] (and
/// snapped to 0 below kRoundingFloor) before f is applied. Throws
/// DomainError if f returns a non-finite value.
HermitianMatrix matrix_function(const DensityMatrix& a, const ScalarMap& f);

/// Schatten p-norm ‖A‖_p = ℓ_p(|λ(A)|); p = +∞ gives the operator norm.
/// Throws ParameterError for p < 1.
double schatten_norm(const HermitianMatrix& a, double p);

/// Singular values, descending.
RealVector singular_values(const Matrix& a);
/// tr|A| for an arbitrary square matrix.
double trace_norm(const Matrix& a);

/// F(ρ₁, ρ₂) = tr|√ρ₁ √ρ₂|.
double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// S(ρ‖σ) = tr ρ(log ρ − log σ), natural log. +∞ when the support of ρ is
/// not contained in the support of σ (tested at kEigenTolerance).
ExtendedReal relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// weight·log(eigenvalue) under the state conventions: an eigenvalue at or
/// below kEigenTolerance counts as 0, giving −∞ unless the weight is itself
/// at or below kEigenTolerance (then 0·log 0 = 0).
ExtendedReal weighted_log(double weight, double eigenvalue);

/// ½ tr|ρ₁ − ρ₂|.
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);
/// (tr|ρ₁ − ρ₂|²)^{1/2}.
double hs_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);
/// √2 · √(1 − F(ρ₁, ρ₂)).
double bures_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);
/// The Bures transform of a fidelity value.
double bures_from_fidelity(double f);

}  // namespace chanbound
