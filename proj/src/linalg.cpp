#include "chanbound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "chanbound/errors.hpp"

namespace chanbound {

// ---------------------------------------------------------------------------
// SpectralVector

SpectralVector::SpectralVector(RealVector values) : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end(), std::greater<>());
}

SpectralVector SpectralVector::state(RealVector values) {
  SpectralVector v(std::move(values));
  if (v.values_.empty()) throw InvalidStateError("state spectrum is empty");
  if (v.values_.back() < -kEigenTolerance) {
    std::ostringstream msg;
    msg << "state spectrum has negative entry " << v.values_.back();
    throw InvalidStateError(msg.str());
  }
  if (std::abs(v.sum() - 1.0) > kEigenTolerance) {
    std::ostringstream msg;
    msg << "state spectrum sums to " << v.sum() << ", not 1";
    throw InvalidStateError(msg.str());
  }
  for (double& x : v.values_) x = std::max(x, 0.0);
  return v;
}

double SpectralVector::sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

RealVector SpectralVector::ascending() const {
  return RealVector(values_.rbegin(), values_.rend());
}

bool SpectralVector::in_simplex(double tol) const {
  if (values_.empty()) return false;
  return values_.back() >= -tol && std::abs(sum() - 1.0) <= tol;
}

Matrix SpectralDecomposition::reconstruct() const {
  return from_eigen(basis, eigenvalues.values());
}

// ---------------------------------------------------------------------------
// Hermitian / density matrices

namespace {

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

bool is_hermitian(const Matrix& a) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, max_abs(a));
  return max_abs(a - a.adjoint()) <= kHermitianTolerance * scale;
}

HermitianMatrix::HermitianMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream msg;
    msg << "expected a nonempty square matrix, got " << m.rows() << "x" << m.cols();
    throw ParameterError(msg.str());
  }
  if (!is_hermitian(m)) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: max |A - A^H| = " << max_abs(m - m.adjoint());
    throw SymmetryError(msg.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMatrix(m);
}

DensityMatrix::DensityMatrix(const Matrix& m) : DensityMatrix(HermitianMatrix(m)) {}

DensityMatrix::DensityMatrix(const HermitianMatrix& h) : h_(h), spectrum_(spectral_decompose(h)) {
  const double tr = h_.matrix().trace().real();
  if (std::abs(tr - 1.0) > kEigenTolerance) {
    std::ostringstream msg;
    msg << "density matrix trace is " << tr << ", not 1";
    throw InvalidStateError(msg.str());
  }
  RealVector ev = spectrum_.eigenvalues.vector();
  if (ev.back() < -kEigenTolerance) {
    std::ostringstream msg;
    msg << "density matrix has negative eigenvalue " << ev.back();
    throw InvalidStateError(msg.str());
  }
  for (double& x : ev) {
    if (x < kRoundingFloor) x = 0.0;
  }
  // Clamping keeps the order, so re-sorting is a no-op.
  spectrum_.eigenvalues = SpectralVector(std::move(ev));
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> values) {
  return DensityMatrix(HermitianMatrix::diagonal(values));
}

DensityMatrix DensityMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

DensityMatrix DensityMatrix::from_spectrum(std::span<const double> values, const Matrix& basis) {
  if (static_cast<Eigen::Index>(values.size()) != basis.cols()) {
    throw ParameterError("spectrum length does not match basis size");
  }
  return DensityMatrix(from_eigen(basis, values));
}

// ---------------------------------------------------------------------------
// Spectral calculus

SpectralDecomposition spectral_decompose(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error("Hermitian eigensolver failed to converge");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const Matrix& vecs = solver.eigenvectors();
  const Eigen::Index n = ev.size();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return ev(i) > ev(j); });

  RealVector values(static_cast<std::size_t>(n));
  Matrix basis(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    values[static_cast<std::size_t>(k)] = ev(src);
    Eigen::VectorXcd col = vecs.col(src);
    Eigen::Index pivot = 0;
    col.cwiseAbs().maxCoeff(&pivot);
    const Complex p = col(pivot);
    if (std::abs(p) > 0.0) col *= std::conj(p) / std::abs(p);
    basis.col(k) = col;
  }
  return SpectralDecomposition{SpectralVector(std::move(values)), std::move(basis)};
}

SpectralDecomposition spectral_decompose(const Matrix& a) {
  return spectral_decompose(HermitianMatrix(a));
}

Matrix from_eigen(const Matrix& basis, std::span<const double> values) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) d(static_cast<Eigen::Index>(i)) = values[i];
  return basis * d.asDiagonal() * basis.adjoint();
}

HermitianMatrix matrix_function(const DensityMatrix& a, const ScalarMap& f) {
  const auto& sd = a.spectrum();
  RealVector mapped(sd.eigenvalues.size());
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    double mu = std::clamp(sd.eigenvalues[i], 0.0, 1.0);
    if (mu < kRoundingFloor) mu = 0.0;
    const double v = f(mu);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "scalar map undefined at eigenvalue " << mu;
      throw DomainError(msg.str(), mu);
    }
    mapped[i] = v;
  }
  return HermitianMatrix(from_eigen(sd.basis, mapped));
}

double schatten_norm(const HermitianMatrix& a, double p) {
  if (!(p >= 1.0)) {
    std::ostringstream msg;
    msg << "Schatten exponent must be >= 1, got " << p;
    throw ParameterError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd abs_ev = solver.eigenvalues().cwiseAbs();
  if (std::isinf(p)) return abs_ev.maxCoeff();
  if (p == 1.0) return abs_ev.sum();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < abs_ev.size(); ++i) acc += std::pow(abs_ev(i), p);
  return std::pow(acc, 1.0 / p);
}

RealVector singular_values(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const Eigen::VectorXd& s = svd.singularValues();
  return RealVector(s.data(), s.data() + s.size());
}

double trace_norm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw ParameterError("fidelity: dimension mismatch");
  const auto sqrt_fn = [](double x) { return std::sqrt(x); };
  const Matrix s1 = matrix_function(rho1, sqrt_fn).matrix();
  const Matrix s2 = matrix_function(rho2, sqrt_fn).matrix();
  return trace_norm(s1 * s2);
}

ExtendedReal weighted_log(double weight, double eigenvalue) {
  if (eigenvalue <= kEigenTolerance) {
    return weight <= kEigenTolerance ? ExtendedReal(0.0) : ExtendedReal::neg_inf();
  }
  return weight * std::log(eigenvalue);
}

ExtendedReal relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw ParameterError("relative_entropy: dimension mismatch");
  const auto& p = rho.eigenvalues();
  ExtendedReal self = 0.0;
  for (double pi : p.values()) self = self + weighted_log(pi, pi);

  // tr ρ log σ = Σ_k ⟨w_k|ρ|w_k⟩ log μ_k over the eigenpairs (μ_k, w_k) of σ.
  const auto& sd = sigma.spectrum();
  ExtendedReal cross = 0.0;
  for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
    const auto w = sd.basis.col(static_cast<Eigen::Index>(k));
    const double weight = std::max(0.0, (w.adjoint() * rho.matrix() * w)(0, 0).real());
    cross = cross + weighted_log(weight, sd.eigenvalues[k]);
  }
  if (cross.is_neg_inf()) return ExtendedReal::pos_inf();
  // Klein's inequality: anything below zero is rounding.
  return std::max(0.0, (self - cross).value());
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw ParameterError("trace_distance: dimension mismatch");
  return 0.5 * schatten_norm(HermitianMatrix(rho1.matrix() - rho2.matrix()), 1.0);
}

double hs_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw ParameterError("hs_distance: dimension mismatch");
  return schatten_norm(HermitianMatrix(rho1.matrix() - rho2.matrix()), 2.0);
}

double bures_from_fidelity(double f) {
  return std::sqrt(2.0) * std::sqrt(std::max(0.0, 1.0 - f));
}

double bures_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  return bures_from_fidelity(fidelity(rho1, rho2));
}

}  // namespace chanbound
