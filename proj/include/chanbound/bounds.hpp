#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "chanbound/extended_real.hpp"
#include "chanbound/linalg.hpp"

namespace chanbound {

/// Unitary ⊂ MixedUnitary = Unital ⊂ All, as sets of reachable Φ(ρ₂).
enum class ChannelClass { kUnitary, kMixedUnitary, kUnital, kAll };

std::string_view to_string(ChannelClass c);
/// Accepts "unitary", "mixed-unitary", "unital", "all". Throws ParameterError.
ChannelClass parse_channel_class(std::string_view s);

/// D(σ₁, σ₂) = d(λ(σ₁ − σ₂)) for a symmetric Schur-convex d.
class SchurConvexObjective {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  SchurConvexObjective(std::string name, Evaluator d, bool strictly_schur_convex);

  /// ℓ_p of the eigenvalues (Schatten p-norm); strict for 1 < p < ∞.
  static SchurConvexObjective schatten(double p);
  /// ½ ℓ₁.
  static SchurConvexObjective trace_distance();
  /// ℓ₂.
  static SchurConvexObjective hs_distance();
  /// Sum of the k largest |x_j|.
  static SchurConvexObjective ky_fan(std::size_t k);

  double operator()(std::span<const double> x) const { return d_(x); }
  /// d(λ(σ₁ − σ₂)) through a full eigendecomposition.
  double evaluate(const DensityMatrix& sigma1, const DensityMatrix& sigma2) const;

  const std::string& name() const { return name_; }
  bool strictly_schur_convex() const { return strict_; }

 private:
  std::string name_;
  Evaluator d_;
  bool strict_;
};

/// Scalar map on [0, 1]: x^p (p > 0) or log x.
struct ScalarFunction {
  enum class Kind { kPower, kLog };
  Kind kind = Kind::kPower;
  double exponent = 1.0;

  static ScalarFunction power(double p);
  static ScalarFunction identity() { return power(1.0); }
  static ScalarFunction sqrt() { return power(0.5); }
  static ScalarFunction log() { return ScalarFunction{Kind::kLog, 0.0}; }

  /// log(0) = −∞.
  double operator()(double x) const;
  bool nonnegative() const { return kind == Kind::kPower; }
  bool increasing() const { return true; }
  bool concave() const { return kind == Kind::kLog || exponent <= 1.0; }
  std::string name() const;

  friend bool operator==(const ScalarFunction&, const ScalarFunction&) = default;
};

/// D(σ₁, σ₂) = tr f(σ₁) g(σ₂), or tr|f(σ₁) g(σ₂)| when absolute.
struct TraceFunctional {
  ScalarFunction f;
  ScalarFunction g;
  bool absolute = false;

  /// tr|√σ₁ √σ₂|.
  static TraceFunctional fidelity() { return {ScalarFunction::sqrt(), ScalarFunction::sqrt(), true}; }
  /// tr σ₁ log σ₂, the cross term of the relative entropy.
  static TraceFunctional log_cross_term() {
    return {ScalarFunction::identity(), ScalarFunction::log(), false};
  }

  std::string name() const;
  /// Full-matrix evaluation at (ρ₁, σ). A log of an eigenvalue at or below
  /// kEigenTolerance is −∞ and only contributes where f(ρ₁) has weight.
  ExtendedReal evaluate(const DensityMatrix& rho1, const DensityMatrix& sigma) const;

  friend bool operator==(const TraceFunctional&, const TraceFunctional&) = default;
};

struct FidelityObjective {};
struct RelativeEntropyObjective {};
struct BuresObjective {};

/// Any objective the bounds engine understands.
class Objective {
 public:
  using Variant = std::variant<SchurConvexObjective, TraceFunctional, FidelityObjective,
                               RelativeEntropyObjective, BuresObjective>;

  template <class T>
    requires std::is_constructible_v<Variant, T>
  Objective(T v) : v_(std::move(v)) {}  // NOLINT: implicit by intent

  static Objective fidelity() { return FidelityObjective{}; }
  static Objective relative_entropy() { return RelativeEntropyObjective{}; }
  static Objective bures() { return BuresObjective{}; }

  const Variant& variant() const { return v_; }
  std::string name() const;
  /// D(ρ₁, σ) on full matrices.
  ExtendedReal evaluate(const DensityMatrix& rho1, const DensityMatrix& sigma) const;

 private:
  Variant v_;
};

/// A target for Φ(ρ₂): its diagonal in the descending eigenbasis of ρ₁.
struct Attainer {
  RealVector spectrum;
  /// Present when the target is a rearrangement of λ(ρ₂) (reachable by a
  /// unitary): spectrum[i] = λ_{source_order[i]}(ρ₂).
  std::optional<std::vector<std::size_t>> source_order;
  std::string alignment;

  friend bool operator==(const Attainer&, const Attainer&) = default;
};

struct BoundReport {
  std::string objective;
  ChannelClass channel_class = ChannelClass::kUnitary;
  ExtendedReal lower;
  ExtendedReal upper;
  std::optional<Attainer> lower_attainer;
  std::optional<Attainer> upper_attainer;
  bool lower_attained = true;
  bool upper_attained = true;
  /// Strictly Schur-convex objective and no degeneracy of ρ₁ that would
  /// admit another attainer.
  bool lower_unique_up_to_degeneracy = false;
  bool upper_unique_up_to_degeneracy = false;

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

BoundReport schur_convex_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                const SchurConvexObjective& obj, ChannelClass cls);

/// Throws NotClosedFormError when (f, g, class) has no closed form here.
BoundReport trace_functional_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                    const TraceFunctional& tf, ChannelClass cls);

BoundReport fidelity_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2, ChannelClass cls);
BoundReport relative_entropy_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                    ChannelClass cls);
BoundReport bures_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2, ChannelClass cls);

/// Dispatches on the objective.
BoundReport compute_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2,
                           const Objective& obj, ChannelClass cls);

}  // namespace chanbound
