#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace chanbound {

/// Exact rational used by the grid oracle and the rational mode of the
/// majorization algorithms. Inputs here have small denominators, so 64-bit
/// numerators are ample.
using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }
inline double to_double(double x) { return x; }

/// "p/q", or "p" when q = 1.
std::string to_string(const Rational& r);

std::vector<double> to_double(const std::vector<Rational>& v);

}  // namespace chanbound
