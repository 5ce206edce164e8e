#include "chanbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chanbound/errors.hpp"
#include "chanbound/majorization.hpp"

namespace chanbound {

// ---------------------------------------------------------------------------
// Channel classes

std::string_view to_string(ChannelClass c) {
  switch (c) {
    case ChannelClass::kUnitary: return "unitary";
    case ChannelClass::kMixedUnitary: return "mixed-unitary";
    case ChannelClass::kUnital: return "unital";
    case ChannelClass::kAll: return "all";
  }
  return "unknown";
}

ChannelClass parse_channel_class(std::string_view s) {
  if (s == "unitary") return ChannelClass::kUnitary;
  if (s == "mixed-unitary") return ChannelClass::kMixedUnitary;
  if (s == "unital") return ChannelClass::kUnital;
  if (s == "all") return ChannelClass::kAll;
  throw ParameterError("unknown channel class '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Objectives

namespace {

std::string format_number(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

double lp_norm(std::span<const double> x, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (double v : x) acc += std::pow(std::abs(v), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace

SchurConvexObjective::SchurConvexObjective(std::string name, Evaluator d, bool strictly_schur_convex)
    : name_(std::move(name)), d_(std::move(d)), strict_(strictly_schur_convex) {}

SchurConvexObjective SchurConvexObjective::schatten(double p) {
  if (!(p >= 1.0)) throw ParameterError("Schatten exponent must be >= 1, got " + format_number(p));
  const bool strict = p > 1.0 && !std::isinf(p);
  const std::string name = std::isinf(p) ? "schatten:inf" : "schatten:" + format_number(p);
  return SchurConvexObjective(name, [p](std::span<const double> x) { return lp_norm(x, p); }, strict);
}

SchurConvexObjective SchurConvexObjective::trace_distance() {
  return SchurConvexObjective("trace", [](std::span<const double> x) { return 0.5 * lp_norm(x, 1.0); },
                              false);
}

SchurConvexObjective SchurConvexObjective::hs_distance() {
  return SchurConvexObjective("hs", [](std::span<const double> x) { return lp_norm(x, 2.0); }, true);
}

SchurConvexObjective SchurConvexObjective::ky_fan(std::size_t k) {
  if (k == 0) throw ParameterError("Ky Fan order must be >= 1");
  return SchurConvexObjective(
      "kyfan:" + std::to_string(k),
      [k](std::span<const double> x) {
        RealVector a(x.size());
        std::transform(x.begin(), x.end(), a.begin(), [](double v) { return std::abs(v); });
        std::sort(a.begin(), a.end(), std::greater<>());
        return std::accumulate(a.begin(), a.begin() + static_cast<long>(std::min(k, a.size())), 0.0);
      },
      false);
}

double SchurConvexObjective::evaluate(const DensityMatrix& sigma1, const DensityMatrix& sigma2) const {
  if (sigma1.dim() != sigma2.dim()) throw ParameterError("objective: dimension mismatch");
  const auto sd = spectral_decompose(HermitianMatrix(sigma1.matrix() - sigma2.matrix()));
  return d_(sd.eigenvalues.values());
}

ScalarFunction ScalarFunction::power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw ParameterError("power map exponent must be positive, got " + format_number(p));
  }
  return ScalarFunction{Kind::kPower, p};
}

double ScalarFunction::operator()(double x) const {
  x = std::max(x, 0.0);
  if (kind == Kind::kLog) return x == 0.0 ? -HUGE_VAL : std::log(x);
  if (exponent == 1.0) return x;
  if (exponent == 0.5) return std::sqrt(x);
  return std::pow(x, exponent);
}

std::string ScalarFunction::name() const {
  if (kind == Kind::kLog) return "log";
  if (exponent == 1.0) return "id";
  if (exponent == 0.5) return "sqrt";
  return "pow" + format_number(exponent);
}

std::string TraceFunctional::name() const {
  return "tf:" + f.name() + ":" + g.name() + (absolute ? ":abs" : "");
}

namespace {

/// One term a·g(x) (or |a·g(x)|) under the state conventions. a ≥ 0.
ExtendedReal pair_term(double a, double x, const TraceFunctional& tf) {
  if (tf.g.kind == ScalarFunction::Kind::kLog) {
    const ExtendedReal w = weighted_log(a, x);
    return tf.absolute ? (w < ExtendedReal(0.0) ? -w : w) : w;
  }
  double xc = std::clamp(x, 0.0, 1.0);
  if (xc < kRoundingFloor) xc = 0.0;
  const double v = a * tf.g(xc);
  return tf.absolute ? std::abs(v) : v;
}

void require_power_f(const TraceFunctional& tf) {
  if (tf.f.kind != ScalarFunction::Kind::kPower) {
    throw NotClosedFormError("trace functional bounds need f to be a power map x^p; got f = " +
                             tf.f.name() + " (use the sampling oracle)");
  }
}

}  // namespace

ExtendedReal TraceFunctional::evaluate(const DensityMatrix& rho1, const DensityMatrix& sigma) const {
  if (rho1.dim() != sigma.dim()) throw ParameterError("objective: dimension mismatch");
  require_power_f(*this);
  const Matrix fr = matrix_function(rho1, f).matrix();
  const auto& sd = sigma.spectrum();
  const std::size_t n = sd.eigenvalues.size();

  if (!absolute) {
    ExtendedReal acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto w = sd.basis.col(static_cast<Eigen::Index>(k));
      const double weight = std::max(0.0, (w.adjoint() * fr * w)(0, 0).real());
      acc = acc + pair_term(weight, sd.eigenvalues[k], *this);
    }
    return acc;
  }

  RealVector gv(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double mu = sd.eigenvalues[k];
    if (g.kind == ScalarFunction::Kind::kLog && mu <= kEigenTolerance) {
      const auto w = sd.basis.col(static_cast<Eigen::Index>(k));
      if ((fr * w).norm() > kEigenTolerance) return ExtendedReal::pos_inf();
      gv[k] = 0.0;
    } else {
      double xc = std::clamp(mu, 0.0, 1.0);
      if (xc < kRoundingFloor) xc = 0.0;
      gv[k] = g(xc);
    }
  }
  return trace_norm(fr * from_eigen(sd.basis, gv));
}

std::string Objective::name() const {
  return std::visit(
      [](const auto& o) -> std::string {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, SchurConvexObjective>) return o.name();
        else if constexpr (std::is_same_v<T, TraceFunctional>) return o.name();
        else if constexpr (std::is_same_v<T, FidelityObjective>) return "fidelity";
        else if constexpr (std::is_same_v<T, RelativeEntropyObjective>) return "relent";
        else return "bures";
      },
      v_);
}

ExtendedReal Objective::evaluate(const DensityMatrix& rho1, const DensityMatrix& sigma) const {
  return std::visit(
      [&](const auto& o) -> ExtendedReal {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, SchurConvexObjective>) return o.evaluate(rho1, sigma);
        else if constexpr (std::is_same_v<T, TraceFunctional>) return o.evaluate(rho1, sigma);
        else if constexpr (std::is_same_v<T, FidelityObjective>) return chanbound::fidelity(rho1, sigma);
        else if constexpr (std::is_same_v<T, RelativeEntropyObjective>)
          return chanbound::relative_entropy(rho1, sigma);
        else return bures_distance(rho1, sigma);
      },
      v_);
}

// ---------------------------------------------------------------------------
// Shared helpers

namespace {

constexpr const char* kAlignDirect =
    "diagonal in the descending eigenbasis of rho1, paired with lambda_desc(rho2)";
constexpr const char* kAlignReversed =
    "diagonal in the descending eigenbasis of rho1, paired with lambda_asc(rho2)";
constexpr const char* kAlignTarget =
    "diagonal in the descending eigenbasis of rho1 (majorized by lambda(rho2))";
constexpr const char* kAlignReplace = "diagonal in the descending eigenbasis of rho1 (any state)";

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> o(n);
  std::iota(o.begin(), o.end(), 0);
  return o;
}

std::vector<std::size_t> reversed(std::vector<std::size_t> o) {
  std::reverse(o.begin(), o.end());
  return o;
}

Attainer rearrangement(const SpectralVector& lam2, std::vector<std::size_t> order,
                       const char* alignment) {
  RealVector s(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) s[i] = lam2[order[i]];
  return Attainer{std::move(s), std::move(order), alignment};
}

Attainer target(RealVector spectrum, const char* alignment) {
  return Attainer{std::move(spectrum), std::nullopt, alignment};
}

RealVector basis_vector_last(std::size_t n) {
  RealVector e(n, 0.0);
  e.back() = 1.0;
  return e;
}

/// An attainer is unique (up to the intertwining unitary) when d is strict
/// and the target is constant on every degenerate eigenspace of ρ₁.
bool unique_attainer(bool strict, const SpectralVector& lam1, const RealVector& spectrum) {
  if (!strict) return false;
  for (std::size_t i = 0; i + 1 < lam1.size(); ++i) {
    if (std::abs(lam1[i] - lam1[i + 1]) <= kEigenTolerance &&
        std::abs(spectrum[i] - spectrum[i + 1]) > kEigenTolerance) {
      return false;
    }
  }
  return true;
}

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw ParameterError("rho1 and rho2 have different dimensions");
}

}  // namespace

// ---------------------------------------------------------------------------
// Schur-convex objectives

BoundReport schur_convex_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                const SchurConvexObjective& obj, ChannelClass cls) {
  require_same_dim(rho1, rho2);
  const SpectralVector& lam1 = rho1.eigenvalues();
  const SpectralVector& lam2 = rho2.eigenvalues();
  const std::size_t n = lam1.size();

  auto value_at = [&](const RealVector& x) {
    RealVector diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = lam1[i] - x[i];
    return obj(diff);
  };

  BoundReport r;
  r.objective = obj.name();
  r.channel_class = cls;

  switch (cls) {
    case ChannelClass::kUnitary:
      r.lower_attainer = rearrangement(lam2, identity_order(n), kAlignDirect);
      r.upper_attainer = rearrangement(lam2, reversed(identity_order(n)), kAlignReversed);
      break;
    case ChannelClass::kMixedUnitary:
    case ChannelClass::kUnital: {
      const auto t = minimize_schur_convex_target(lam1, lam2);
      r.lower_attainer = target(t.d, kAlignTarget);
      r.upper_attainer = rearrangement(lam2, reversed(identity_order(n)), kAlignReversed);
      break;
    }
    case ChannelClass::kAll:
      r.lower_attainer = target(lam1.vector(), kAlignReplace);
      r.upper_attainer = target(basis_vector_last(n), kAlignReplace);
      break;
  }
  r.lower = value_at(r.lower_attainer->spectrum);
  r.upper = value_at(r.upper_attainer->spectrum);
  r.lower_unique_up_to_degeneracy =
      unique_attainer(obj.strictly_schur_convex(), lam1, r.lower_attainer->spectrum);
  r.upper_unique_up_to_degeneracy =
      unique_attainer(obj.strictly_schur_convex(), lam1, r.upper_attainer->spectrum);
  return r;
}

// ---------------------------------------------------------------------------
// Trace functionals

namespace {

bool is_power_pair_summing_to_one(const TraceFunctional& tf) {
  return tf.f.kind == ScalarFunction::Kind::kPower && tf.g.kind == ScalarFunction::Kind::kPower &&
         std::abs(tf.f.exponent + tf.g.exponent - 1.0) <= 1e-12;
}

bool is_identity_log(const TraceFunctional& tf) {
  return !tf.absolute && tf.f == ScalarFunction::identity() && tf.g.kind == ScalarFunction::Kind::kLog;
}

/// Closed-form maxima beyond the unitary orbit exist only for these shapes.
void require_block_case(const TraceFunctional& tf, ChannelClass cls) {
  if (!is_power_pair_summing_to_one(tf) && !is_identity_log(tf)) {
    throw NotClosedFormError("no closed-form maximum of " + tf.name() + " over the " +
                             std::string(to_string(cls)) +
                             " class; use the sampling oracle for an estimate");
  }
}

/// Infima beyond the unitary orbit need g increasing concave (and, for the
/// absolute form, nonnegative f and g).
void require_concave_case(const TraceFunctional& tf, ChannelClass cls) {
  const bool ok = tf.g.increasing() && tf.g.concave() &&
                  (!tf.absolute || (tf.f.nonnegative() && tf.g.nonnegative()));
  if (!ok) {
    throw NotClosedFormError("no closed-form minimum of " + tf.name() + " over the " +
                             std::string(to_string(cls)) +
                             " class; use the sampling oracle for an estimate");
  }
}

ExtendedReal paired_sum(const RealVector& a, const RealVector& x, const TraceFunctional& tf) {
  ExtendedReal acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc = acc + pair_term(a[i], x[i], tf);
  return acc;
}

}  // namespace

BoundReport trace_functional_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                    const TraceFunctional& tf, ChannelClass cls) {
  require_same_dim(rho1, rho2);
  require_power_f(tf);
  const SpectralVector& lam1 = rho1.eigenvalues();
  const SpectralVector& lam2 = rho2.eigenvalues();
  const std::size_t n = lam1.size();

  // f is increasing, so f(ρ₁) has eigenvalues f(λ_j(ρ₁)) in the same order.
  RealVector a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = tf.f(lam1[i]);

  BoundReport r;
  r.objective = tf.name();
  r.channel_class = cls;

  switch (cls) {
    case ChannelClass::kUnitary: {
      // Order λ(ρ₂) so that g (or |g|) of it is descending.
      std::vector<ExtendedReal> key(n);
      for (std::size_t i = 0; i < n; ++i) key[i] = pair_term(1.0, lam2[i], tf);
      auto order = identity_order(n);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t i, std::size_t j) { return key[i] > key[j]; });
      r.upper_attainer = rearrangement(lam2, order, kAlignDirect);
      r.lower_attainer = rearrangement(lam2, reversed(order), kAlignReversed);
      break;
    }
    case ChannelClass::kMixedUnitary:
    case ChannelClass::kUnital: {
      require_concave_case(tf, cls);
      require_block_case(tf, cls);
      r.lower_attainer = rearrangement(lam2, reversed(identity_order(n)), kAlignReversed);
      const auto t = maximize_trace_functional_target(lam1, lam2);
      r.upper_attainer = target(t.d, kAlignTarget);
      break;
    }
    case ChannelClass::kAll:
      require_concave_case(tf, cls);
      require_block_case(tf, cls);
      r.lower_attainer = target(basis_vector_last(n), kAlignReplace);
      r.upper_attainer = target(lam1.vector(), kAlignReplace);
      break;
  }
  r.lower = paired_sum(a, r.lower_attainer->spectrum, tf);
  r.upper = paired_sum(a, r.upper_attainer->spectrum, tf);
  // At σ = ρ₁ a power pair with p + q = 1 gives Σ λ_j = 1 exactly.
  if (cls == ChannelClass::kAll && is_power_pair_summing_to_one(tf)) r.upper = 1.0;
  return r;
}

BoundReport fidelity_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2, ChannelClass cls) {
  BoundReport r = trace_functional_bounds(rho1, rho2, TraceFunctional::fidelity(), cls);
  r.objective = "fidelity";
  return r;
}

BoundReport relative_entropy_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                    ChannelClass cls) {
  const BoundReport cross =
      trace_functional_bounds(rho1, rho2, TraceFunctional::log_cross_term(), cls);
  ExtendedReal self = 0.0;
  for (double a : rho1.eigenvalues().values()) self = self + weighted_log(a, a);

  BoundReport r;
  r.objective = "relent";
  r.channel_class = cls;
  r.lower = self - cross.upper;
  r.upper = self - cross.lower;
  // Rounding can leave the smallest value a hair below zero.
  if (r.lower.is_finite() && r.lower.value() < 0.0 && r.lower.value() > -1e-12) r.lower = 0.0;
  r.lower_attainer = cross.upper_attainer;
  r.upper_attainer = cross.lower_attainer;
  return r;
}

BoundReport bures_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2, ChannelClass cls) {
  const BoundReport fid = fidelity_bounds(rho1, rho2, cls);
  BoundReport r;
  r.objective = "bures";
  r.channel_class = cls;
  r.lower = bures_from_fidelity(fid.upper.value());
  r.upper = bures_from_fidelity(fid.lower.value());
  r.lower_attainer = fid.upper_attainer;
  r.upper_attainer = fid.lower_attainer;
  return r;
}

BoundReport compute_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2,
                           const Objective& obj, ChannelClass cls) {
  return std::visit(
      [&](const auto& o) -> BoundReport {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, SchurConvexObjective>)
          return schur_convex_bounds(rho1, rho2, o, cls);
        else if constexpr (std::is_same_v<T, TraceFunctional>)
          return trace_functional_bounds(rho1, rho2, o, cls);
        else if constexpr (std::is_same_v<T, FidelityObjective>)
          return fidelity_bounds(rho1, rho2, cls);
        else if constexpr (std::is_same_v<T, RelativeEntropyObjective>)
          return relative_entropy_bounds(rho1, rho2, cls);
        else return bures_bounds(rho1, rho2, cls);
      },
      obj.variant());
}

}  // namespace chanbound
