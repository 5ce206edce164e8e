#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "chanbound/bounds.hpp"
#include "chanbound/channels.hpp"
#include "chanbound/linalg.hpp"
#include "chanbound/rational.hpp"

namespace chanbound {

/// Slack allowed when a sampled value is compared against a closed form.
inline constexpr double kBracketTolerance = 1e-9;

/// Deterministic random source. Identical seeds give identical streams, and
/// split() derives independent child streams reproducibly.
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }
  std::uint64_t splits() const { return splits_; }

  double uniform();  ///< [0, 1)
  double normal();   ///< standard Gaussian
  double exponential();
  std::size_t index(std::size_t n);  ///< uniform on {0, …, n−1}

  SeededSampler split();

 private:
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
  std::uint64_t splits_ = 0;
  std::mt19937_64 engine_;
};

/// Haar-distributed n×n unitary (QR of a complex Ginibre matrix, with the
/// phases of R's diagonal moved into Q).
Matrix haar_unitary(std::size_t n, SeededSampler& s);

/// Random state with Haar eigenbasis. The rank is drawn uniformly from
/// {1, …, n} unless given; nonzero eigenvalues are normalized exponentials.
DensityMatrix random_state(std::size_t n, SeededSampler& s, std::optional<std::size_t> rank = {});

/// Random point of {x : x ≺ b}, sorted descending.
SpectralVector sample_polytope(const SpectralVector& b, SeededSampler& s);

/// Random channel from a class. Unitary: one Haar unitary. Mixed-unitary and
/// unital: a mixture of 1 to n+1 Haar unitaries with random weights. All:
/// with equal odds a random isometry dilation (environment of dimension n)
/// or a replacement channel to a random state.
KrausChannel random_channel(ChannelClass cls, std::size_t n, SeededSampler& s);

struct BracketResult {
  ExtendedReal observed_min = ExtendedReal::pos_inf();
  ExtendedReal observed_max = ExtendedReal::neg_inf();
  std::size_t trials = 0;
  std::size_t violations = 0;
  ExtendedReal lower;  ///< closed-form interval that was checked
  ExtendedReal upper;
};

struct BracketOptions {
  /// Also evaluate the channels built from the reported attainers.
  bool include_attainers = false;
};

/// Samples `trials` channels from the class, evaluates D(ρ₁, Φ(ρ₂)) on full
/// matrices and counts values outside [lower − 1e−9, upper + 1e−9] of the
/// closed-form report.
BracketResult bracket_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2,
                             const Objective& obj, ChannelClass cls, std::size_t trials,
                             SeededSampler& s, BracketOptions opts = {});
/// Same, against an already computed report.
BracketResult bracket_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2,
                             const Objective& obj, const BoundReport& report, std::size_t trials,
                             SeededSampler& s, BracketOptions opts = {});

// ---------------------------------------------------------------------------
// Exhaustive grid search

enum class Sense { kMinimize, kMaximize };

/// Objective on grid points. Exact objectives are compared exactly; floating
/// ones treat values within 1e−12 as ties.
struct GridObjective {
  std::variant<std::function<Rational(std::span<const Rational>)>,
               std::function<double(std::span<const Rational>)>>
      f;

  /// Σ (a_j − x_j)², exact.
  static GridObjective l2_squared(std::vector<Rational> a);
  /// Σ f(a_j) g(x_j) with the state conventions for log at zero.
  static GridObjective trace_functional(std::vector<Rational> a, ScalarFunction f, ScalarFunction g);
};

struct GridOptimum {
  double value = 0.0;
  std::optional<Rational> exact_value;
  std::vector<std::vector<Rational>> argopt;  ///< every optimal grid point
  std::size_t feasible = 0;                   ///< grid points with x ≺ b
};

/// Enumerates every descending x with entries in (1/denom)ℤ₊ and Σx = 1,
/// keeps those with x ≺ b, and returns the optimum with all optimizers.
/// Requires 1 ≤ n ≤ 4; refuses grids of more than 10⁷ points.
GridOptimum exhaustive_grid_optimum(std::span<const Rational> b, const GridObjective& obj,
                                    std::int64_t denom, Sense sense);

/// Number of grid points exhaustive_grid_optimum would visit.
std::uint64_t grid_size(std::size_t n, std::int64_t denom);

}  // namespace chanbound
