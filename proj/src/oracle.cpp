#include "chanbound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chanbound/errors.hpp"
#include "chanbound/majorization.hpp"

namespace chanbound {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

SeededSampler::SeededSampler(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

double SeededSampler::uniform() {
  ++draws_;
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double SeededSampler::normal() {
  // Box–Muller keeps the stream independent of library distribution state.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double SeededSampler::exponential() { return -std::log(1.0 - uniform()); }

std::size_t SeededSampler::index(std::size_t n) {
  ++draws_;
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

SeededSampler SeededSampler::split() {
  ++splits_;
  return SeededSampler(splitmix64(seed_ ^ splitmix64(splits_ * 0xd1342543de82ef95ULL)));
}

// ---------------------------------------------------------------------------
// Random matrices and states

Matrix haar_unitary(std::size_t n, SeededSampler& s) {
  if (n == 0) throw ParameterError("haar_unitary: dimension must be positive");
  const auto N = static_cast<Eigen::Index>(n);
  Matrix z(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index i = 0; i < N; ++i) z(i, j) = Complex(s.normal(), s.normal()) / std::sqrt(2.0);
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(N, N);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < N; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

DensityMatrix random_state(std::size_t n, SeededSampler& s, std::optional<std::size_t> rank) {
  if (n == 0) throw ParameterError("random_state: dimension must be positive");
  const std::size_t r = rank ? *rank : 1 + s.index(n);
  if (r == 0 || r > n) throw ParameterError("random_state: rank out of range");
  RealVector ev(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < r; ++i) total += ev[i] = s.exponential() + 1e-3;
  for (std::size_t i = 0; i < r; ++i) ev[i] /= total;
  return DensityMatrix::from_spectrum(ev, haar_unitary(n, s));
}

SpectralVector sample_polytope(const SpectralVector& b, SeededSampler& s) {
  if (!b.in_simplex()) throw ParameterError("sample_polytope: input is not in the simplex");
  const std::size_t n = b.size();
  RealVector x = b.vector();
  if (n < 2) return SpectralVector(x);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    // Random relabelling, then one T-transform on a random pair.
    for (std::size_t i = n - 1; i > 0; --i) std::swap(x[i], x[s.index(i + 1)]);
    const std::size_t i = s.index(n);
    std::size_t j = s.index(n - 1);
    if (j >= i) ++j;
    double t = s.uniform();
    if (s.uniform() < 0.25) t = s.uniform() < 0.5 ? 0.0 : 1.0;
    const double xi = x[i], xj = x[j];
    x[i] = t * xi + (1.0 - t) * xj;
    x[j] = t * xj + (1.0 - t) * xi;
  }
  std::sort(x.begin(), x.end(), std::greater<>());
  // Mixing with b itself keeps the point in the polytope and reaches the
  // region near b more often.
  if (s.uniform() < 0.25) {
    const double w = s.uniform();
    for (std::size_t i = 0; i < n; ++i) x[i] = w * x[i] + (1.0 - w) * b[i];
  }
  return SpectralVector(std::move(x));
}

KrausChannel random_channel(ChannelClass cls, std::size_t n, SeededSampler& s) {
  switch (cls) {
    case ChannelClass::kUnitary:
      return KrausChannel({haar_unitary(n, s)});
    case ChannelClass::kMixedUnitary:
    case ChannelClass::kUnital: {
      const std::size_t k = 1 + s.index(n + 1);
      std::vector<double> w(k);
      double total = 0.0;
      for (double& x : w) total += x = s.exponential();
      std::vector<Matrix> us;
      for (double& x : w) {
        x /= total;
        us.push_back(haar_unitary(n, s));
      }
      // Exact renormalization of the last weight.
      w.back() = std::max(0.0, 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0));
      return MixedUnitaryChannel(std::move(w), std::move(us)).to_kraus();
    }
    case ChannelClass::kAll: {
      if (s.uniform() < 0.5) return replacement_channel(random_state(n, s));
      const auto N = static_cast<Eigen::Index>(n);
      const Matrix v = haar_unitary(n * n, s).leftCols(N);
      std::vector<Matrix> ops;
      for (Eigen::Index j = 0; j < N; ++j) ops.push_back(v.middleRows(j * N, N));
      return KrausChannel(std::move(ops));
    }
  }
  throw ParameterError("random_channel: unknown class");
}

// ---------------------------------------------------------------------------
// Bracketing

BracketResult bracket_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2,
                             const Objective& obj, const BoundReport& report, std::size_t trials,
                             SeededSampler& s, BracketOptions opts) {
  if (trials == 0) throw ParameterError("bracket_bounds: trials must be positive");
  BracketResult r;
  r.lower = report.lower;
  r.upper = report.upper;
  const ExtendedReal lo = report.lower - ExtendedReal(kBracketTolerance);
  const ExtendedReal hi = report.upper + ExtendedReal(kBracketTolerance);

  auto record = [&](const KrausChannel& phi) {
    const ExtendedReal v = obj.evaluate(rho1, apply(phi, rho2));
    ++r.trials;
    r.observed_min = std::min(r.observed_min, v);
    r.observed_max = std::max(r.observed_max, v);
    if (v < lo || v > hi) ++r.violations;
  };

  const auto n = static_cast<std::size_t>(rho1.dim());
  for (std::size_t t = 0; t < trials; ++t) {
    SeededSampler trial = s.split();
    record(random_channel(report.channel_class, n, trial));
  }
  if (opts.include_attainers) {
    for (const auto& a : {report.lower_attainer, report.upper_attainer}) {
      if (a) record(attaining_channel(rho1, rho2, *a, report.channel_class).kraus);
    }
  }
  return r;
}

BracketResult bracket_bounds(const DensityMatrix& rho1, const DensityMatrix& rho2,
                             const Objective& obj, ChannelClass cls, std::size_t trials,
                             SeededSampler& s, BracketOptions opts) {
  return bracket_bounds(rho1, rho2, obj, compute_bounds(rho1, rho2, obj, cls), trials, s, opts);
}

// ---------------------------------------------------------------------------
// Grid search

GridObjective GridObjective::l2_squared(std::vector<Rational> a) {
  return GridObjective{std::function<Rational(std::span<const Rational>)>(
      [a = std::move(a)](std::span<const Rational> x) {
        Rational acc(0);
        for (std::size_t i = 0; i < x.size(); ++i) acc += (a[i] - x[i]) * (a[i] - x[i]);
        return acc;
      })};
}

GridObjective GridObjective::trace_functional(std::vector<Rational> a, ScalarFunction f,
                                              ScalarFunction g) {
  return GridObjective{std::function<double(std::span<const Rational>)>(
      [a = std::move(a), f, g](std::span<const Rational> x) {
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double fa = f(to_double(a[i]));
          const double xi = to_double(x[i]);
          if (g.kind == ScalarFunction::Kind::kLog) {
            const ExtendedReal w = weighted_log(fa, xi);
            if (w.is_neg_inf()) return -HUGE_VAL;
            acc += w.value();
          } else {
            acc += fa * g(xi);
          }
        }
        return acc;
      })};
}

std::uint64_t grid_size(std::size_t n, std::int64_t denom) {
  // Partitions of denom into at most n parts.
  const auto m = static_cast<std::size_t>(denom);
  std::vector<std::uint64_t> p(m + 1, 0);
  p[0] = 1;
  for (std::size_t part = 1; part <= n; ++part) {
    // Conjugation: at most n parts ⇔ parts of size at most n.
    for (std::size_t v = part; v <= m; ++v) p[v] += p[v - part];
  }
  return p[m];
}

namespace {

void enumerate(std::vector<std::int64_t>& k, std::size_t pos, std::int64_t remaining,
               std::int64_t cap, const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  const std::size_t n = k.size();
  if (pos + 1 == n) {
    if (remaining <= cap) {
      k[pos] = remaining;
      visit(k);
    }
    return;
  }
  const auto slots = static_cast<std::int64_t>(n - pos);
  // k[pos] ≥ every later entry, so k[pos] ≥ ⌈remaining / slots⌉.
  const std::int64_t lo = (remaining + slots - 1) / slots;
  for (std::int64_t v = std::min(cap, remaining); v >= lo; --v) {
    k[pos] = v;
    enumerate(k, pos + 1, remaining - v, v, visit);
  }
}

}  // namespace

GridOptimum exhaustive_grid_optimum(std::span<const Rational> b, const GridObjective& obj,
                                    std::int64_t denom, Sense sense) {
  const std::size_t n = b.size();
  if (n < 1 || n > 4) throw ParameterError("exhaustive_grid_optimum: requires 1 <= n <= 4");
  if (denom < 1) throw ParameterError("exhaustive_grid_optimum: denominator must be positive");
  const std::uint64_t size = grid_size(n, denom);
  if (size > 10'000'000ULL) {
    std::ostringstream msg;
    msg << "exhaustive_grid_optimum: grid of " << size << " points exceeds the 1e7 limit";
    throw ParameterError(msg.str());
  }

  GridOptimum out;
  bool have = false;
  Rational best_exact(0);
  double best = 0.0;
  const bool minimize = sense == Sense::kMinimize;
  const double tie = 1e-12;

  std::vector<Rational> x(n);
  std::vector<std::int64_t> k(n);
  enumerate(k, 0, denom, denom, [&](const std::vector<std::int64_t>& kk) {
    for (std::size_t i = 0; i < n; ++i) x[i] = Rational(kk[i], denom);
    if (majorization_violation<Rational>(x, b, Rational(0))) return;
    ++out.feasible;
    if (const auto* fe = std::get_if<0>(&obj.f)) {
      const Rational v = (*fe)(x);
      if (!have || (minimize ? v < best_exact : v > best_exact)) {
        have = true;
        best_exact = v;
        out.argopt.clear();
      }
      if (v == best_exact) out.argopt.push_back(x);
    } else {
      const double v = std::get<1>(obj.f)(x);
      const bool same = v == best || std::abs(v - best) <= tie;
      if (!have || (!same && (minimize ? v < best : v > best))) {
        have = true;
        best = v;
        out.argopt.clear();
        out.argopt.push_back(x);
      } else if (same) {
        out.argopt.push_back(x);
      }
    }
  });

  if (!have) throw ParameterError("exhaustive_grid_optimum: no feasible grid point");
  if (obj.f.index() == 0) {
    out.exact_value = best_exact;
    out.value = to_double(best_exact);
  } else {
    out.value = best;
  }
  return out;
}

}  // namespace chanbound
