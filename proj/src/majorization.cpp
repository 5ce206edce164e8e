#include "chanbound/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "chanbound/errors.hpp"

namespace chanbound {

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << "/" << r.denominator();
  return os.str();
}

std::vector<double> to_double(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& r : v) out.push_back(to_double(r));
  return out;
}

namespace {

template <class Scalar>
Scalar abs_value(const Scalar& x) {
  return x < Scalar(0) ? -x : x;
}

template <class Scalar>
Scalar default_tolerance();
template <>
double default_tolerance<double>() { return kAlgorithmTolerance; }
template <>
Rational default_tolerance<Rational>() { return Rational(0); }

template <class Scalar>
bool nearly_equal(const Scalar& x, const Scalar& y, const Scalar& tol) {
  return abs_value(x - y) <= tol;
}

void require_same_length(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    std::ostringstream msg;
    msg << where << ": length mismatch (" << a << " vs " << b << ")";
    throw ParameterError(msg.str());
  }
}

void require_simplex(const SpectralVector& v, const char* where) {
  if (!v.in_simplex()) {
    std::ostringstream msg;
    msg << where << ": input is not in the probability simplex";
    throw ParameterError(msg.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Predicates

template <class Scalar>
std::optional<std::size_t> majorization_violation(std::span<const Scalar> x,
                                                  std::span<const Scalar> y, Scalar tol) {
  require_same_length(x.size(), y.size(), "majorization_violation");
  Scalar sx(0), sy(0);
  const std::size_t n = x.size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    sx += x[k];
    sy += y[k];
    if (sx > sy + tol) return k + 1;
  }
  if (n > 0) {
    sx += x[n - 1];
    sy += y[n - 1];
  }
  if (!nearly_equal(sx, sy, tol)) return std::size_t{0};
  return std::nullopt;
}

template std::optional<std::size_t> majorization_violation<double>(std::span<const double>,
                                                                   std::span<const double>, double);
template std::optional<std::size_t> majorization_violation<Rational>(std::span<const Rational>,
                                                                     std::span<const Rational>,
                                                                     Rational);

bool is_majorized(const SpectralVector& x, const SpectralVector& y, MajorizationMode mode,
                  double tol) {
  require_same_length(x.size(), y.size(), "is_majorized");
  const std::size_t n = x.size();
  switch (mode) {
    case MajorizationMode::kStrong:
      return !majorization_violation<double>(x.values(), y.values(), tol).has_value();
    case MajorizationMode::kWeak: {
      double sx = 0.0, sy = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        sx += x[k];
        sy += y[k];
        if (sx > sy + tol) return false;
      }
      return true;
    }
    case MajorizationMode::kLog: {
      if (n > 0 && (x[n - 1] < -tol || y[n - 1] < -tol)) {
        throw ParameterError("is_majorized: log mode requires nonnegative entries");
      }
      // Entries at or below tol count as zeros; a prefix product containing
      // a zero is 0, so only the (zero-free x, zero-containing y) case fails.
      double lx = 0.0, ly = 0.0;
      std::size_t zx = 0, zy = 0;
      auto prefix_ok = [&] {
        if (zx > 0) return true;
        if (zy > 0) return false;
        return lx <= ly + tol;
      };
      for (std::size_t k = 0; k < n; ++k) {
        if (x[k] <= tol) ++zx; else lx += std::log(x[k]);
        if (y[k] <= tol) ++zy; else ly += std::log(y[k]);
        if (k + 1 < n && !prefix_ok()) return false;
      }
      // Full products must agree.
      if ((zx > 0) != (zy > 0)) return false;
      return zx > 0 || std::abs(lx - ly) <= tol;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Pool adjacent violators

template <class Scalar>
SchurConvexTarget<Scalar> minimize_schur_convex_target(std::span<const Scalar> lam1,
                                                       std::span<const Scalar> lam2) {
  require_same_length(lam1.size(), lam2.size(), "minimize_schur_convex_target");
  const std::size_t n = lam1.size();
  const Scalar tol = default_tolerance<Scalar>();

  SchurConvexTarget<Scalar> out;
  std::vector<Scalar> delta(n);
  for (std::size_t i = 0; i < n; ++i) delta[i] = lam1[i] - lam2[i];
  out.initial_delta = delta;

  // Each pass strictly reduces the number of distinct plateaus, so n passes
  // always suffice.
  for (std::size_t pass = 0; pass <= n; ++pass) {
    std::size_t k = 1;
    while (k < n && !(delta[k - 1] < delta[k] && !nearly_equal(delta[k - 1], delta[k], tol))) ++k;
    if (k >= n) break;

    std::size_t first = k - 1;
    while (first > 0 && nearly_equal(delta[first - 1], delta[k - 1], tol)) --first;
    std::size_t last = k;
    while (last + 1 < n && nearly_equal(delta[last + 1], delta[k], tol)) ++last;

    Scalar total(0);
    for (std::size_t i = first; i <= last; ++i) total += delta[i];
    const Scalar mean = total / Scalar(static_cast<long>(last - first + 1));
    for (std::size_t i = first; i <= last; ++i) delta[i] = mean;
    out.steps.push_back(PoolingStep<Scalar>{first, last, delta});
  }

  out.d.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.d[i] = lam1[i] - delta[i];
  out.delta = std::move(delta);
  return out;
}

template SchurConvexTarget<double> minimize_schur_convex_target<double>(std::span<const double>,
                                                                        std::span<const double>);
template SchurConvexTarget<Rational> minimize_schur_convex_target<Rational>(
    std::span<const Rational>, std::span<const Rational>);

SchurConvexTarget<double> minimize_schur_convex_target(const SpectralVector& lam1,
                                                       const SpectralVector& lam2) {
  require_simplex(lam1, "minimize_schur_convex_target");
  require_simplex(lam2, "minimize_schur_convex_target");
  return minimize_schur_convex_target<double>(lam1.values(), lam2.values());
}

// ---------------------------------------------------------------------------
// Proportional-block maximizer

namespace {

// a[begin..k)/Σa ≺ b[begin..k)/Σb, both heads descending.
template <class Scalar>
bool normalized_head_majorized(std::span<const Scalar> a, std::span<const Scalar> b,
                               std::size_t begin, std::size_t k, const Scalar& tol) {
  Scalar sa(0), sb(0);
  for (std::size_t i = begin; i < k; ++i) {
    sa += a[i];
    sb += b[i];
  }
  if (!(sb > Scalar(0))) return false;
  Scalar pa(0), pb(0);
  for (std::size_t i = begin; i + 1 < k; ++i) {
    pa += a[i];
    pb += b[i];
    if (pa / sa > pb / sb + tol) return false;
  }
  return true;
}

}  // namespace

template <class Scalar>
TraceFunctionalTarget<Scalar> maximize_trace_functional_target(std::span<const Scalar> a,
                                                               std::span<const Scalar> b) {
  require_same_length(a.size(), b.size(), "maximize_trace_functional_target");
  const std::size_t n = a.size();
  const Scalar tol = default_tolerance<Scalar>();

  TraceFunctionalTarget<Scalar> out;
  out.d.assign(n, Scalar(0));

  std::size_t r = 0;
  while (r < n && a[r] > Scalar(0)) ++r;
  out.structure.support = r;
  for (std::size_t i = r; i < n; ++i) out.d[i] = b[i];

  std::size_t begin = 0;
  while (begin < r) {
    std::size_t k = r;
    while (k > begin + 1 && !normalized_head_majorized(a, b, begin, k, tol)) --k;

    Scalar sa(0), sb(0);
    for (std::size_t i = begin; i < k; ++i) {
      sa += a[i];
      sb += b[i];
    }
    if (!(sa > Scalar(0)) || !(sb > Scalar(0))) {
      throw std::logic_error("maximize_trace_functional_target: empty block mass");
    }
    const Scalar ratio = sb / sa;
    for (std::size_t i = begin; i < k; ++i) out.d[i] = ratio * a[i];
    out.structure.blocks.push_back(Block<Scalar>{begin, k, ratio});
    begin = k;
  }
  return out;
}

template TraceFunctionalTarget<double> maximize_trace_functional_target<double>(
    std::span<const double>, std::span<const double>);
template TraceFunctionalTarget<Rational> maximize_trace_functional_target<Rational>(
    std::span<const Rational>, std::span<const Rational>);

TraceFunctionalTarget<double> maximize_trace_functional_target(const SpectralVector& a,
                                                               const SpectralVector& b) {
  require_simplex(a, "maximize_trace_functional_target");
  require_simplex(b, "maximize_trace_functional_target");
  return maximize_trace_functional_target<double>(a.values(), b.values());
}

// ---------------------------------------------------------------------------
// T-transform chains

Eigen::MatrixXd t_transform_matrix(std::size_t n, const TTransform& t) {
  const auto N = static_cast<Eigen::Index>(n);
  const auto i = static_cast<Eigen::Index>(t.i);
  const auto j = static_cast<Eigen::Index>(t.j);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(N, N);
  m(i, i) = t.t;
  m(j, j) = t.t;
  m(i, j) = 1.0 - t.t;
  m(j, i) = 1.0 - t.t;
  return m;
}

MajorizationCertificate transfer_chain(const SpectralVector& y, const SpectralVector& x) {
  require_same_length(x.size(), y.size(), "transfer_chain");
  if (auto bad = majorization_violation<double>(x.values(), y.values(), kMajorizationTolerance)) {
    std::ostringstream msg;
    if (*bad == 0) {
      msg << "target is not majorized by source: totals differ";
    } else {
      msg << "target is not majorized by source: prefix " << *bad << " exceeds";
    }
    throw MajorizationError(msg.str(), *bad);
  }

  const std::size_t n = x.size();
  const double scale = std::max(1.0, std::abs(y[0]));
  const double eps = 1e-14 * scale;

  MajorizationCertificate cert;
  cert.source = y;
  cert.target = x;
  cert.doubly_stochastic = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                     static_cast<Eigen::Index>(n));

  RealVector w = y.vector();
  const RealVector& target = x.vector();
  for (std::size_t step = 0; step < n; ++step) {
    std::optional<std::size_t> j;
    for (std::size_t i = n; i-- > 0;) {
      if (w[i] > target[i] + eps) {
        j = i;
        break;
      }
    }
    if (!j) break;
    std::optional<std::size_t> k;
    for (std::size_t i = *j + 1; i < n; ++i) {
      if (w[i] < target[i] - eps) {
        k = i;
        break;
      }
    }
    if (!k) break;

    const double surplus = w[*j] - target[*j];
    const double deficit = target[*k] - w[*k];
    const double delta = std::min(surplus, deficit);
    const double t = 1.0 - delta / (w[*j] - w[*k]);
    if (surplus <= deficit) {
      w[*j] = target[*j];
      w[*k] += delta;
    } else {
      w[*j] -= delta;
      w[*k] = target[*k];
    }
    const TTransform tt{*j, *k, t};
    cert.chain.push_back(tt);
    cert.doubly_stochastic = t_transform_matrix(n, tt) * cert.doubly_stochastic;
  }
  return cert;
}

}  // namespace chanbound
