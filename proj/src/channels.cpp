#include "chanbound/channels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "chanbound/errors.hpp"
#include "chanbound/majorization.hpp"

namespace chanbound {

namespace {

constexpr double kPruneWeight = 1e-14;
constexpr double kDropEigenvalue = 1e-15;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix completeness(const std::vector<Matrix>& ops) {
  Matrix s = Matrix::Zero(ops.front().rows(), ops.front().cols());
  for (const auto& f : ops) s += f.adjoint() * f;
  return s;
}

Matrix unitality(const std::vector<Matrix>& ops) {
  Matrix s = Matrix::Zero(ops.front().rows(), ops.front().cols());
  for (const auto& f : ops) s += f * f.adjoint();
  return s;
}

void check_shapes(const std::vector<Matrix>& ops) {
  if (ops.empty()) throw ParameterError("channel has no Kraus operators");
  const Eigen::Index n = ops.front().rows();
  if (n == 0) throw ParameterError("Kraus operators are empty");
  for (const auto& f : ops) {
    if (f.rows() != n || f.cols() != n) {
      std::ostringstream msg;
      msg << "Kraus operator is " << f.rows() << "x" << f.cols() << ", expected " << n << "x" << n;
      throw ParameterError(msg.str());
    }
  }
}

bool near_identity(const Matrix& m) {
  return max_abs(m - Matrix::Identity(m.rows(), m.cols())) <= kChannelTolerance;
}

Matrix permutation_matrix(const std::vector<std::size_t>& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < p.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p[i])) = 1.0;
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Channel types

KrausChannel::KrausChannel(std::vector<Matrix> ops, NoCheck) : ops_(std::move(ops)) {
  check_shapes(ops_);
}

KrausChannel::KrausChannel(std::vector<Matrix> ops) : KrausChannel(std::move(ops), NoCheck{}) {
  const Matrix s = completeness(ops_);
  if (!near_identity(s)) {
    std::ostringstream msg;
    msg << "Kraus operators are not trace preserving: max |sum F^H F - I| = "
        << max_abs(s - Matrix::Identity(s.rows(), s.cols()));
    throw ParameterError(msg.str());
  }
}

KrausChannel KrausChannel::unchecked(std::vector<Matrix> ops) {
  return KrausChannel(std::move(ops), NoCheck{});
}

MixedUnitaryChannel::MixedUnitaryChannel(std::vector<double> weights, std::vector<Matrix> unitaries)
    : weights_(std::move(weights)), unitaries_(std::move(unitaries)) {
  if (weights_.size() != unitaries_.size()) {
    throw ParameterError("mixed-unitary channel: weight and unitary counts differ");
  }
  check_shapes(unitaries_);
  double total = 0.0;
  for (double t : weights_) {
    if (!(t >= 0.0)) throw ParameterError("mixed-unitary channel: negative weight");
    total += t;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "mixed-unitary channel: weights sum to " << total;
    throw ParameterError(msg.str());
  }
  for (const auto& u : unitaries_) {
    if (!near_identity(u.adjoint() * u)) throw ParameterError("mixed-unitary channel: operator is not unitary");
  }
}

KrausChannel MixedUnitaryChannel::to_kraus() const {
  std::vector<Matrix> ops;
  ops.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) ops.push_back(std::sqrt(weights_[i]) * unitaries_[i]);
  return KrausChannel(std::move(ops));
}

// ---------------------------------------------------------------------------
// Constructions

Matrix aligning_unitary(const DensityMatrix& rho2, const Matrix& basis,
                        std::span<const std::size_t> order) {
  const Matrix& w = rho2.eigenbasis();
  if (basis.rows() != w.rows() || basis.cols() != w.cols() ||
      static_cast<Eigen::Index>(order.size()) != w.cols()) {
    throw ParameterError("aligning_unitary: dimension mismatch");
  }
  Matrix u = Matrix::Zero(w.rows(), w.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    u += basis.col(static_cast<Eigen::Index>(i)) * w.col(static_cast<Eigen::Index>(order[i])).adjoint();
  }
  return u;
}

Matrix optimal_unitary(const DensityMatrix& rho1, const DensityMatrix& rho2, Pairing pairing) {
  if (rho1.dim() != rho2.dim()) throw ParameterError("optimal_unitary: dimension mismatch");
  std::vector<std::size_t> order(static_cast<std::size_t>(rho1.dim()));
  std::iota(order.begin(), order.end(), 0);
  if (pairing == Pairing::kReversed) std::reverse(order.begin(), order.end());
  return aligning_unitary(rho2, rho1.eigenbasis(), order);
}

MixedUnitaryChannel mixed_unitary_to_target(const DensityMatrix& rho2, std::span<const double> target,
                                            const Matrix& basis) {
  const std::size_t n = static_cast<std::size_t>(rho2.dim());
  if (target.size() != n || basis.rows() != rho2.dim() || basis.cols() != rho2.dim()) {
    throw ParameterError("mixed_unitary_to_target: dimension mismatch");
  }

  // q[k] is the position in `target` of the k-th largest entry.
  std::vector<std::size_t> q(n);
  std::iota(q.begin(), q.end(), 0);
  std::stable_sort(q.begin(), q.end(), [&](std::size_t a, std::size_t b) { return target[a] > target[b]; });
  RealVector sorted(n);
  for (std::size_t k = 0; k < n; ++k) sorted[k] = target[q[k]];

  const MajorizationCertificate cert = transfer_chain(rho2.eigenvalues(), SpectralVector(sorted));

  // Each branch is a permutation p with (P x)[i] = x[p[i]].
  std::map<std::vector<std::size_t>, double> branches;
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), 0);
  branches[id] = 1.0;
  for (const TTransform& t : cert.chain) {
    std::map<std::vector<std::size_t>, double> next;
    for (const auto& [p, w] : branches) {
      if (w * t.t >= kPruneWeight) next[p] += w * t.t;
      if (w * (1.0 - t.t) >= kPruneWeight) {
        auto swapped = p;
        std::swap(swapped[t.i], swapped[t.j]);
        next[swapped] += w * (1.0 - t.t);
      }
    }
    branches = std::move(next);
  }

  double total = 0.0;
  for (const auto& [p, w] : branches) total += w;

  Matrix b_sorted(basis.rows(), basis.cols());
  for (std::size_t k = 0; k < n; ++k) {
    b_sorted.col(static_cast<Eigen::Index>(k)) = basis.col(static_cast<Eigen::Index>(q[k]));
  }
  const Matrix v2_adj = rho2.eigenbasis().adjoint();

  std::vector<double> weights;
  std::vector<Matrix> unitaries;
  for (const auto& [p, w] : branches) {
    weights.push_back(w / total);
    unitaries.push_back(b_sorted * permutation_matrix(p) * v2_adj);
  }
  return MixedUnitaryChannel(std::move(weights), std::move(unitaries));
}

KrausChannel replacement_channel(const DensityMatrix& sigma) {
  const auto& sd = sigma.spectrum();
  const Eigen::Index n = sigma.dim();
  std::vector<Matrix> ops;
  for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i) {
    const double mu = sd.eigenvalues[i];
    if (mu <= kDropEigenvalue) continue;
    const Eigen::VectorXcd v = std::sqrt(mu) * sd.basis.col(static_cast<Eigen::Index>(i));
    for (Eigen::Index j = 0; j < n; ++j) {
      Matrix f = Matrix::Zero(n, n);
      f.col(j) = v;
      ops.push_back(std::move(f));
    }
  }
  return KrausChannel(std::move(ops));
}

DensityMatrix apply(const KrausChannel& phi, const DensityMatrix& rho) {
  if (phi.dim() != rho.dim()) {
    std::ostringstream msg;
    msg << "channel acts on dimension " << phi.dim() << ", state has dimension " << rho.dim();
    throw ParameterError(msg.str());
  }
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const auto& f : phi.ops()) out += f * rho.matrix() * f.adjoint();
  return DensityMatrix(Matrix(0.5 * (out + out.adjoint())));
}

DensityMatrix apply(const MixedUnitaryChannel& phi, const DensityMatrix& rho) {
  return apply(phi.to_kraus(), rho);
}

ChannelClassification classify(const KrausChannel& phi) {
  ChannelClassification c;
  c.trace_preserving = near_identity(completeness(phi.ops()));
  c.unital = near_identity(unitality(phi.ops()));
  c.mixed_unitary_form = std::all_of(phi.ops().begin(), phi.ops().end(), [](const Matrix& f) {
    const Matrix g = f.adjoint() * f;
    const Complex scale = g.trace() / static_cast<double>(g.rows());
    return max_abs(g - scale * Matrix::Identity(g.rows(), g.cols())) <= kChannelTolerance;
  });
  return c;
}

ConstructedChannel attaining_channel(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                     const Attainer& attainer, ChannelClass cls) {
  if (rho1.dim() != rho2.dim()) throw ParameterError("attaining_channel: dimension mismatch");
  const Matrix& basis = rho1.eigenbasis();
  if (attainer.source_order) {
    MixedUnitaryChannel mu({1.0}, {aligning_unitary(rho2, basis, *attainer.source_order)});
    return ConstructedChannel{mu.to_kraus(), std::move(mu)};
  }
  if (cls == ChannelClass::kAll) {
    const DensityMatrix sigma = DensityMatrix::from_spectrum(attainer.spectrum, basis);
    return ConstructedChannel{replacement_channel(sigma), std::nullopt};
  }
  MixedUnitaryChannel mu = mixed_unitary_to_target(rho2, attainer.spectrum, basis);
  return ConstructedChannel{mu.to_kraus(), std::move(mu)};
}

}  // namespace chanbound
