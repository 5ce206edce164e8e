#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chanbound/bounds.hpp"
#include "chanbound/errors.hpp"
#include "chanbound/oracle.hpp"

using namespace chanbound;

namespace {

const DensityMatrix kA = DensityMatrix::diagonal({.4, .3, .3, 0});
const DensityMatrix kB = DensityMatrix::diagonal({.5, .2, .2, .1});

/// Extremes of Σ h(a_i, b_{π(i)}) over all permutations π.
template <class H>
std::pair<double, double> permutation_extremes(const RealVector& a, RealVector b, H h) {
  std::sort(b.begin(), b.end());
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  do {
    double v = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) v += h(a[i], b[i]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  } while (std::next_permutation(b.begin(), b.end()));
  return {lo, hi};
}

std::vector<Objective> finite_objectives() {
  return {SchurConvexObjective::trace_distance(), SchurConvexObjective::hs_distance(),
          SchurConvexObjective::schatten(3.0), SchurConvexObjective::ky_fan(2), Objective::fidelity(),
          Objective::relative_entropy(), Objective::bures()};
}

}  // namespace

TEST_CASE("channel class names") {
  for (auto c : {ChannelClass::kUnitary, ChannelClass::kMixedUnitary, ChannelClass::kUnital, ChannelClass::kAll}) {
    CHECK(parse_channel_class(to_string(c)) == c);
  }
  CHECK_THROWS_AS(parse_channel_class("cptp"), ParameterError);
}

TEST_CASE("built-in Schur-convex objectives are symmetric and Schur-convex") {
  SeededSampler s(1);
  for (const auto& d : {SchurConvexObjective::trace_distance(), SchurConvexObjective::hs_distance(),
                        SchurConvexObjective::schatten(1.5), SchurConvexObjective::schatten(HUGE_VAL),
                        SchurConvexObjective::ky_fan(2)}) {
    for (int rep = 0; rep < 100; ++rep) {
      RealVector y(4);
      for (double& v : y) v = s.normal();
      RealVector shuffled = y;
      std::reverse(shuffled.begin(), shuffled.end());
      CHECK(d(y) == doctest::Approx(d(shuffled)).epsilon(1e-14));
      // x = average of y with a transposed copy is majorized by y.
      const double t = s.uniform();
      RealVector x = y;
      x[0] = t * y[0] + (1 - t) * y[2];
      x[2] = t * y[2] + (1 - t) * y[0];
      CHECK(d(x) <= d(y) + 1e-12);
    }
  }
  CHECK(SchurConvexObjective::schatten(2.0).strictly_schur_convex());
  CHECK_FALSE(SchurConvexObjective::schatten(1.0).strictly_schur_convex());
  CHECK_FALSE(SchurConvexObjective::trace_distance().strictly_schur_convex());
  CHECK_THROWS_AS(SchurConvexObjective::schatten(0.5), ParameterError);
}

TEST_CASE("unitary-orbit attainers from the three-level discussion") {
  const auto r1 = DensityMatrix::diagonal({.55, .45, 0});
  const auto r2 = DensityMatrix::diagonal({.35, .33, .32});
  const auto r = schur_convex_bounds(r1, r2, SchurConvexObjective::schatten(1.0), ChannelClass::kUnitary);
  CHECK(r.lower.value() == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(r.upper.value() == doctest::Approx(0.70).epsilon(1e-12));
  REQUIRE(r.upper_attainer);
  CHECK(r.upper_attainer->spectrum == RealVector{.32, .33, .35});
  CHECK(r.upper_attainer->source_order == std::vector<std::size_t>{2, 1, 0});
}

TEST_CASE("identical states on the unitary orbit") {
  SeededSampler s(2);
  const auto rho = random_state(3, s);
  const auto r = schur_convex_bounds(rho, rho, SchurConvexObjective::hs_distance(), ChannelClass::kUnitary);
  CHECK(r.lower.value() == doctest::Approx(0.0));
  CHECK(r.lower_attainer->spectrum == rho.eigenvalues().vector());
}

TEST_CASE("unital l2 minimum on the worked example") {
  const auto r = schur_convex_bounds(kA, kB, SchurConvexObjective::hs_distance(), ChannelClass::kUnital);
  const double expect = std::sqrt(3 * std::pow(1.0 / 30, 2) + std::pow(0.1, 2));
  CHECK(r.lower.value() == doctest::Approx(expect).epsilon(1e-12));
  CHECK(r.lower_unique_up_to_degeneracy);
}

TEST_CASE("fidelity and relative entropy on the worked example") {
  const auto f = fidelity_bounds(kA, kB, ChannelClass::kUnital);
  CHECK(std::abs(f.lower.value() - (2 + 2 * std::sqrt(6.0)) / 10) <= 1e-12);
  CHECK(std::abs(f.upper.value() - 3 / std::sqrt(10.0)) <= 1e-12);
  CHECK(f.upper_attainer->spectrum[0] == doctest::Approx(0.36));

  const auto s = relative_entropy_bounds(kA, kB, ChannelClass::kUnital);
  CHECK(std::abs(s.lower.value() - std::log(10.0 / 9)) <= 1e-12);
  CHECK(std::abs(s.upper.value() - (0.4 * std::log(4.0) + 0.6 * std::log(1.5))) <= 1e-12);
}

TEST_CASE("all-channel closed forms") {
  SeededSampler s(3);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + s.index(4);
    const auto r1 = random_state(n, s, n);
    const auto r2 = random_state(n, s);
    const auto f = fidelity_bounds(r1, r2, ChannelClass::kAll);
    CHECK(f.lower.value() == doctest::Approx(std::sqrt(r1.eigenvalues()[n - 1])).epsilon(1e-10));
    CHECK(f.upper.value() == doctest::Approx(1.0).epsilon(1e-10));
    const auto e = relative_entropy_bounds(r1, r2, ChannelClass::kAll);
    CHECK(std::abs(e.lower.value()) <= 1e-10);
    CHECK(e.upper.is_pos_inf());
    const auto t = schur_convex_bounds(r1, r2, SchurConvexObjective::trace_distance(), ChannelClass::kAll);
    CHECK(t.lower.value() == doctest::Approx(0.0));
    CHECK(t.upper.value() == doctest::Approx(1.0 - r1.eigenvalues()[n - 1]).epsilon(1e-12));
  }
}

TEST_CASE("unitary rearrangement bounds agree with permutation enumeration on diagonal states") {
  SeededSampler s(4);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + s.index(4);
    const auto r1 = random_state(n, s, n);
    const auto r2 = random_state(n, s, n);
    const RealVector a = r1.eigenvalues().vector(), b = r2.eigenvalues().vector();
    const auto d1 = DensityMatrix::diagonal(a), d2 = DensityMatrix::diagonal(b);

    const auto [flo, fhi] = permutation_extremes(a, b, [](double x, double y) { return std::sqrt(x * y); });
    const auto f = fidelity_bounds(d1, d2, ChannelClass::kUnitary);
    CHECK(f.lower.value() == doctest::Approx(flo).epsilon(1e-12));
    CHECK(f.upper.value() == doctest::Approx(fhi).epsilon(1e-12));

    const auto [llo, lhi] = permutation_extremes(a, b, [](double x, double y) { return (x - y) * (x - y); });
    const auto h = schur_convex_bounds(d1, d2, SchurConvexObjective::hs_distance(), ChannelClass::kUnitary);
    CHECK(h.lower.value() == doctest::Approx(std::sqrt(llo)).epsilon(1e-12));
    CHECK(h.upper.value() == doctest::Approx(std::sqrt(lhi)).epsilon(1e-12));

    const auto [clo, chi] =
        permutation_extremes(a, b, [](double x, double y) { return x * std::log(x / y); });
    const auto e = relative_entropy_bounds(d1, d2, ChannelClass::kUnitary);
    CHECK(e.lower.value() == doctest::Approx(clo).epsilon(1e-12));
    CHECK(e.upper.value() == doctest::Approx(chi).epsilon(1e-12));
  }
}

TEST_CASE("maximally mixed input makes the unital fidelity interval a point") {
  SeededSampler s(5);
  const std::size_t n = 4;
  const auto r1 = random_state(n, s, n);
  const RealVector flat(n, 1.0 / n);
  const auto f = fidelity_bounds(r1, DensityMatrix::diagonal(flat), ChannelClass::kUnital);
  double tr_sqrt = 0.0;
  for (double x : r1.eigenvalues().values()) tr_sqrt += std::sqrt(x);
  CHECK(f.lower.value() == doctest::Approx(tr_sqrt / 2.0).epsilon(1e-12));
  CHECK(f.upper.value() == doctest::Approx(tr_sqrt / 2.0).epsilon(1e-12));
}

TEST_CASE("class monotonicity, report invariants and mixed-unitary equivalence") {
  SeededSampler s(6);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 2 + s.index(5);
    const auto r1 = random_state(n, s), r2 = random_state(n, s);
    for (const auto& obj : finite_objectives()) {
      const auto u = compute_bounds(r1, r2, obj, ChannelClass::kUnitary);
      const auto m = compute_bounds(r1, r2, obj, ChannelClass::kMixedUnitary);
      const auto l = compute_bounds(r1, r2, obj, ChannelClass::kUnital);
      const auto a = compute_bounds(r1, r2, obj, ChannelClass::kAll);
      const ExtendedReal eps(1e-10);
      CHECK(a.lower <= l.lower + eps);
      CHECK(l.lower <= u.lower + eps);
      CHECK(u.upper <= l.upper + eps);
      CHECK(l.upper <= a.upper + eps);
      for (const auto* r : {&u, &l, &a}) CHECK(r->lower <= r->upper + eps);
      CHECK(m.lower == l.lower);
      CHECK(m.upper == l.upper);
      CHECK(m.lower_attainer == l.lower_attainer);
      CHECK(m.upper_attainer == l.upper_attainer);
    }
    const auto fu = fidelity_bounds(r1, r2, ChannelClass::kUnitary);
    const auto fl = fidelity_bounds(r1, r2, ChannelClass::kUnital);
    CHECK(std::abs(fu.lower.value() - fl.lower.value()) <= 1e-12);
  }
}

TEST_CASE("absolute and plain trace functionals agree for nonnegative maps") {
  SeededSampler s(7);
  const auto r1 = random_state(4, s), r2 = random_state(4, s);
  const TraceFunctional plain{ScalarFunction::power(0.3), ScalarFunction::power(0.7), false};
  const TraceFunctional abs{ScalarFunction::power(0.3), ScalarFunction::power(0.7), true};
  for (auto c : {ChannelClass::kUnitary, ChannelClass::kUnital, ChannelClass::kAll}) {
    const auto p = trace_functional_bounds(r1, r2, plain, c);
    const auto q = trace_functional_bounds(r1, r2, abs, c);
    CHECK(p.lower.value() == doctest::Approx(q.lower.value()).epsilon(1e-14));
    CHECK(p.upper.value() == doctest::Approx(q.upper.value()).epsilon(1e-14));
  }
}

TEST_CASE("unsupported shapes raise not-closed-form errors") {
  const TraceFunctional convex{ScalarFunction::identity(), ScalarFunction::power(2.0), false};
  CHECK_NOTHROW(trace_functional_bounds(kA, kB, convex, ChannelClass::kUnitary));
  CHECK_THROWS_AS(trace_functional_bounds(kA, kB, convex, ChannelClass::kUnital), NotClosedFormError);
  const TraceFunctional unmatched{ScalarFunction::sqrt(), ScalarFunction::power(0.25), false};
  CHECK_THROWS_AS(trace_functional_bounds(kA, kB, unmatched, ChannelClass::kAll), NotClosedFormError);
  const TraceFunctional log_f{ScalarFunction::log(), ScalarFunction::identity(), false};
  CHECK_THROWS_AS(trace_functional_bounds(kA, kB, log_f, ChannelClass::kUnitary), NotClosedFormError);
}

TEST_CASE("Haar bracketing of unitary-class bounds") {
  SeededSampler s(8);
  const auto r1 = random_state(3, s), r2 = random_state(3, s);
  for (const auto& obj : finite_objectives()) {
    const auto b = bracket_bounds(r1, r2, obj, ChannelClass::kUnitary, 1000, s);
    CHECK(b.violations == 0);
  }
}

TEST_CASE("degenerate reference states are not reported as unique") {
  const auto r1 = DensityMatrix::diagonal({.4, .3, .3, 0});
  const auto r2 = DensityMatrix::diagonal({.5, .3, .1, .1});
  const auto r = schur_convex_bounds(r1, r2, SchurConvexObjective::hs_distance(), ChannelClass::kUnitary);
  CHECK_FALSE(r.lower_unique_up_to_degeneracy);
  const auto t = schur_convex_bounds(r1, r2, SchurConvexObjective::trace_distance(), ChannelClass::kUnitary);
  CHECK_FALSE(t.upper_unique_up_to_degeneracy);
}
