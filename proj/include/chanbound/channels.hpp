#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "chanbound/bounds.hpp"
#include "chanbound/linalg.hpp"

namespace chanbound {

/// Completeness / unitarity tolerance for channels.
inline constexpr double kChannelTolerance = 1e-10;

/// Φ(X) = Σ F_j X F_j†.
class KrausChannel {
 public:
  /// Requires square operators of a common size and Σ F†F = I within
  /// kChannelTolerance. Throws ParameterError.
  explicit KrausChannel(std::vector<Matrix> ops);
  /// Shape checks only; used for user-supplied files that are classified
  /// rather than trusted.
  static KrausChannel unchecked(std::vector<Matrix> ops);

  const std::vector<Matrix>& ops() const { return ops_; }
  Eigen::Index dim() const { return ops_.front().rows(); }

 private:
  struct NoCheck {};
  KrausChannel(std::vector<Matrix> ops, NoCheck);
  std::vector<Matrix> ops_;
};

/// Φ(X) = Σ t_i U_i X U_i†.
class MixedUnitaryChannel {
 public:
  /// Throws ParameterError unless every U_i is unitary within
  /// kChannelTolerance, t_i ≥ 0 and Σ t_i = 1 ± 1e−12.
  MixedUnitaryChannel(std::vector<double> weights, std::vector<Matrix> unitaries);

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Matrix>& unitaries() const { return unitaries_; }
  std::size_t size() const { return weights_.size(); }
  Eigen::Index dim() const { return unitaries_.front().rows(); }

  /// Kraus operators √t_i U_i.
  KrausChannel to_kraus() const;

 private:
  std::vector<double> weights_;
  std::vector<Matrix> unitaries_;
};

enum class Pairing { kDirect, kReversed };

/// U with Uρ₂U† diagonal in ρ₁'s descending eigenbasis, carrying λ↓(ρ₂)
/// (direct) or λ↑(ρ₂) (reversed).
Matrix optimal_unitary(const DensityMatrix& rho1, const DensityMatrix& rho2, Pairing pairing);

/// U = Σ_i b_i w_{order[i]}†, mapping the order[i]-th descending eigenvector
/// w of ρ₂ onto column i of basis.
Matrix aligning_unitary(const DensityMatrix& rho2, const Matrix& basis,
                        std::span<const std::size_t> order);

/// Mixed-unitary Φ with Φ(ρ₂) = basis · diag(target) · basis†. The target
/// need not be sorted; its sorted form must be majorized by λ(ρ₂). Built by
/// flattening a T-transform chain into weighted permutations. Throws
/// MajorizationError.
MixedUnitaryChannel mixed_unitary_to_target(const DensityMatrix& rho2, std::span<const double> target,
                                            const Matrix& basis);

/// Φ(X) = tr(X)·σ.
KrausChannel replacement_channel(const DensityMatrix& sigma);

/// Throws ParameterError on a dimension mismatch, InvalidStateError when the
/// output is not a state (only possible for non-trace-preserving input).
DensityMatrix apply(const KrausChannel& phi, const DensityMatrix& rho);
DensityMatrix apply(const MixedUnitaryChannel& phi, const DensityMatrix& rho);

struct ChannelClassification {
  bool trace_preserving = false;
  bool unital = false;
  /// Every F_j is a multiple of a unitary. Sufficient, not necessary.
  bool mixed_unitary_form = false;
};

ChannelClassification classify(const KrausChannel& phi);

/// A channel realizing an attainer; `mixed` is set whenever the channel was
/// built as a mixture of unitaries.
struct ConstructedChannel {
  KrausChannel kraus;
  std::optional<MixedUnitaryChannel> mixed;
};

/// Materializes an attainer from the bounds engine: a single unitary for a
/// rearrangement, a replacement channel for the all-channel class, and a
/// mixed-unitary channel otherwise.
ConstructedChannel attaining_channel(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                     const Attainer& attainer, ChannelClass cls);

}  // namespace chanbound
