#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chanbound/linalg.hpp"
#include "chanbound/rational.hpp"

namespace chanbound {

/// Prefix-sum tolerance for the float majorization predicate.
inline constexpr double kMajorizationTolerance = 1e-10;
/// Plateau-equality / block-test tolerance inside the two algorithms.
inline constexpr double kAlgorithmTolerance = 1e-12;

enum class MajorizationMode { kStrong, kWeak, kLog };

/// x ≺ y (strong), x ≺_w y (weak) or x ≺_log y (log). Throws
/// ParameterError on length mismatch, or for log mode on a negative entry.
bool is_majorized(const SpectralVector& x, const SpectralVector& y,
                  MajorizationMode mode = MajorizationMode::kStrong,
                  double tol = kMajorizationTolerance);

/// Strong-majorization check on two descending sequences. Returns the first
/// violated prefix length k (1 ≤ k < n), 0 if the totals differ, or nullopt
/// when x ≺ y. Rational callers pass tol = 0 for an exact test.
template <class Scalar>
std::optional<std::size_t> majorization_violation(std::span<const Scalar> x,
                                                  std::span<const Scalar> y, Scalar tol);

// ---------------------------------------------------------------------------
// Closest majorized point for Schur-convex objectives (pool adjacent
// violators on Δ = λ(ρ₁) − λ(ρ₂)).

template <class Scalar>
struct PoolingStep {
  std::size_t first = 0;  ///< first pooled index (0-based)
  std::size_t last = 0;   ///< last pooled index, inclusive
  std::vector<Scalar> delta;  ///< Δ after this pooling
};

template <class Scalar>
struct SchurConvexTarget {
  std::vector<Scalar> d;              ///< optimal spectrum for Φ(ρ₂), descending
  std::vector<Scalar> initial_delta;  ///< λ(ρ₁) − λ(ρ₂)
  std::vector<Scalar> delta;          ///< final, non-increasing Δ = λ(ρ₁) − d
  std::vector<PoolingStep<Scalar>> steps;
};

/// Starting from Δ = lam1 − lam2, repeatedly locate the leftmost ascending
/// step Δ_{k−1} < Δ_k, extend it left over the plateau ending at k−1 and
/// right over the plateau starting at k, and replace that run by its mean.
/// Stops once Δ is non-increasing; d = lam1 − Δ. Plateaus are detected with
/// kAlgorithmTolerance for double and exactly for Rational.
template <class Scalar>
SchurConvexTarget<Scalar> minimize_schur_convex_target(std::span<const Scalar> lam1,
                                                       std::span<const Scalar> lam2);

/// Float entry point; both inputs must lie in Ω_n.
SchurConvexTarget<double> minimize_schur_convex_target(const SpectralVector& lam1,
                                                       const SpectralVector& lam2);

// ---------------------------------------------------------------------------
// Maximizer of Σ f(a_j) g(x_j) over x ≺ b for the power pairs p + q = 1 and
// for (x, log x).

template <class Scalar>
struct Block {
  std::size_t begin = 0;  ///< 0-based, inclusive
  std::size_t end = 0;    ///< exclusive
  Scalar ratio{};         ///< α = Σ b / Σ a over the block
};

template <class Scalar>
struct BlockStructure {
  std::vector<Block<Scalar>> blocks;
  /// r: number of positive entries of a. Entries [r, n) of d copy b.
  std::size_t support = 0;
};

template <class Scalar>
struct TraceFunctionalTarget {
  std::vector<Scalar> d;
  BlockStructure<Scalar> structure;
};

/// Strips the zero tail of a (copying the matching tail of b into d), then
/// repeatedly takes the largest k for which the normalized heads satisfy
/// a[..k]/Σa ≺ b[..k]/Σb, sets that d-block to (Σb/Σa)·a and continues on
/// the remainder.
template <class Scalar>
TraceFunctionalTarget<Scalar> maximize_trace_functional_target(std::span<const Scalar> a,
                                                               std::span<const Scalar> b);

TraceFunctionalTarget<double> maximize_trace_functional_target(const SpectralVector& a,
                                                               const SpectralVector& b);

// ---------------------------------------------------------------------------
// T-transform certificates

/// y ← t·y + (1 − t)·P_{ij} y, where P_{ij} swaps entries i and j.
struct TTransform {
  std::size_t i = 0;
  std::size_t j = 0;
  double t = 1.0;
};

struct MajorizationCertificate {
  SpectralVector source;  ///< y
  SpectralVector target;  ///< x
  std::vector<TTransform> chain;  ///< applied first to last
  Eigen::MatrixXd doubly_stochastic;  ///< D = T_m ⋯ T_1, D·y = x
};

/// Witness for x ≺ y as at most n − 1 T-transforms. At each step the last
/// coordinate where the working vector still exceeds x is paired with the
/// first later coordinate that falls short, and the smaller gap is closed.
/// Throws MajorizationError naming the first violated prefix.
MajorizationCertificate transfer_chain(const SpectralVector& y, const SpectralVector& x);

/// n×n matrix of a single T-transform.
Eigen::MatrixXd t_transform_matrix(std::size_t n, const TTransform& t);

}  // namespace chanbound
