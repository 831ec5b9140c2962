#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace pch {

// Exact arithmetic everywhere; no floating point touches a probability.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat make_rat(long num, long den = 1) { return Rat(Int(num), Int(den)); }

// Renders "p/q", or just "p" for integers. Always in lowest terms.
std::string rat_to_string(const Rat& r);

// Accepts "p", "-p", "p/q" with arbitrary-precision parts. Throws
// std::invalid_argument on anything else (including q == 0).
Rat rat_from_string(const std::string& text);

}  // namespace pch
