#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace agti {

// Exact integer ratios for the exactness checks of the forward models.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational &r) { return r.convert_to<double>(); }
inline double to_double(double x) noexcept { return x; }

}  // namespace agti
