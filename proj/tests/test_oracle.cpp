#include <doctest.h>

#include <cmath>

#include "chanbound/errors.hpp"
#include "chanbound/majorization.hpp"
#include "chanbound/oracle.hpp"

using namespace chanbound;

namespace {

using R = Rational;

std::vector<R> rationals(std::initializer_list<std::pair<long, long>> v) {
  std::vector<R> out;
  for (auto [p, q] : v) out.emplace_back(p, q);
  return out;
}

}  // namespace

TEST_CASE("sampler determinism and splitting") {
  SeededSampler a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  CHECK(a.uniform() != c.uniform());
  SeededSampler x(7), y(7);
  SeededSampler xs = x.split(), ys = y.split();
  CHECK(xs.normal() == ys.normal());
  SeededSampler x2 = x.split();
  CHECK(x2.seed() != xs.seed());
  CHECK(x.splits() == 2);
}

TEST_CASE("Haar unitaries") {
  SeededSampler s(1);
  const Matrix u1 = haar_unitary(1, s);
  CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-12);

  for (std::size_t n : {2u, 3u, 5u}) {
    const Matrix u = haar_unitary(n, s);
    CHECK((u.adjoint() * u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  }

  SeededSampler p(9), q(9);
  CHECK(haar_unitary(3, p) == haar_unitary(3, q));

  // E[U E11 U^H] = I/n.
  const std::size_t n = 3;
  Matrix mean = Matrix::Zero(n, n);
  const int samples = 10000;
  for (int k = 0; k < samples; ++k) {
    const Matrix u = haar_unitary(n, s);
    mean += u.col(0) * u.col(0).adjoint();
  }
  mean /= samples;
  CHECK((mean - Matrix::Identity(n, n) / double(n)).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("polytope sampler") {
  SeededSampler s(2);
  const SpectralVector flat{0.25, 0.25, 0.25, 0.25};
  for (int k = 0; k < 100; ++k) {
    const auto x = sample_polytope(flat, s);
    for (std::size_t i = 0; i < 4; ++i) CHECK(x[i] == doctest::Approx(0.25).epsilon(1e-15));
  }

  // Qubit face: first coordinate covers [0.5, 1].
  double lo = 1.0, hi = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const auto x = sample_polytope({1.0, 0.0}, s);
    lo = std::min(lo, x[0]);
    hi = std::max(hi, x[0]);
  }
  CHECK(lo < 0.52);
  CHECK(hi > 0.98);

  std::size_t failures = 0;
  for (int k = 0; k < 100000; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 5);
    const SpectralVector b = random_state(n, s).eigenvalues();
    if (!is_majorized(sample_polytope(b, s), b)) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("random channels are channels of the requested class") {
  SeededSampler s(3);
  for (auto cls : {ChannelClass::kUnitary, ChannelClass::kMixedUnitary, ChannelClass::kUnital, ChannelClass::kAll}) {
    for (int k = 0; k < 20; ++k) {
      const auto c = classify(random_channel(cls, 3, s));
      CHECK(c.trace_preserving);
      if (cls != ChannelClass::kAll) CHECK(c.unital);
    }
  }
}

TEST_CASE("bracketing") {
  SeededSampler s(4);
  const auto r1 = random_state(3, s), r2 = random_state(3, s);

  const auto b = bracket_bounds(r1, r2, SchurConvexObjective::trace_distance(), ChannelClass::kUnitary, 2000, s);
  CHECK(b.violations == 0);
  CHECK(b.observed_max.value() >= b.upper.value() * (1 - 5e-2));

  BracketOptions opts;
  opts.include_attainers = true;
  const auto same = bracket_bounds(r1, r1, SchurConvexObjective::trace_distance(), ChannelClass::kAll, 50, s, opts);
  CHECK(same.violations == 0);
  CHECK(std::abs(same.observed_min.value() - same.lower.value()) < 1e-12);

  CHECK_THROWS_AS(bracket_bounds(r1, r2, Objective::fidelity(), ChannelClass::kAll, 0, s), ParameterError);
}

TEST_CASE("grid search on the worked examples") {
  const auto a = rationals({{2, 5}, {3, 10}, {3, 10}, {0, 1}});
  const auto b = rationals({{1, 2}, {1, 5}, {1, 5}, {1, 10}});

  const auto fid = exhaustive_grid_optimum(
      b, GridObjective::trace_functional(a, ScalarFunction::sqrt(), ScalarFunction::sqrt()), 100, Sense::kMaximize);
  REQUIRE(fid.argopt.size() == 1);
  CHECK(fid.argopt[0] == rationals({{36, 100}, {27, 100}, {27, 100}, {1, 10}}));
  CHECK(fid.value == doctest::Approx(3 / std::sqrt(10.0)).epsilon(1e-12));

  const auto l2 = exhaustive_grid_optimum(b, GridObjective::l2_squared(a), 30, Sense::kMinimize);
  REQUIRE(l2.argopt.size() == 1);
  CHECK(l2.argopt[0] == rationals({{11, 30}, {8, 30}, {8, 30}, {3, 30}}));
  CHECK(*l2.exact_value == R(4, 300));
}

TEST_CASE("grid search small cases and guards") {
  const auto half = rationals({{1, 2}, {1, 2}});
  const auto r = exhaustive_grid_optimum(
      half, GridObjective::trace_functional(half, ScalarFunction::sqrt(), ScalarFunction::sqrt()), 10,
      Sense::kMaximize);
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.argopt == std::vector<std::vector<R>>{half});
  CHECK(r.feasible == 1);

  CHECK(grid_size(3, 12) == 19);
  CHECK_THROWS_AS(exhaustive_grid_optimum(rationals({{1, 5}, {1, 5}, {1, 5}, {1, 5}, {1, 5}}),
                                          GridObjective::l2_squared(rationals({{1, 5}, {1, 5}, {1, 5}, {1, 5}, {1, 5}})),
                                          10, Sense::kMinimize),
                  ParameterError);
  CHECK_THROWS_AS(exhaustive_grid_optimum(half, GridObjective::l2_squared(half), 100'000'000, Sense::kMinimize),
                  ParameterError);
}
