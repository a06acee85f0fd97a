#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ssm {

// Working precision for all certified arithmetic. Fixed well above the
// admissible precision_digits range [30, 180] so requested margins always
// have headroom; the runtime knob controls stopping targets and error
// thresholds, not the representation.
inline constexpr unsigned working_digits = 240;

using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<working_digits>,
                                           boost::multiprecision::et_off>;
using HComplex = boost::multiprecision::cpp_complex<working_digits>;
using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Raised when a comparison or rounding decision cannot be certified at the
// requested precision. Never a silent guess.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline const Real& real_pi() {
  static const Real v = boost::math::constants::pi<Real>();
  return v;
}

inline const Real& real_two_pi() {
  static const Real v = 2 * boost::math::constants::pi<Real>();
  return v;
}

inline double to_double(const Real& x) { return x.convert_to<double>(); }

inline Real pow10(int e) { return boost::multiprecision::pow(Real(10), e); }

// 10^-digits: the decision threshold tied to the user-visible precision knob.
inline Real precision_threshold(int digits) { return pow10(-digits); }

struct FracDecomp {
  Real frac;       // in (-1/2, 1/2]
  BigInt integer;  // x = integer + frac
};

// Centered fractional part with exact integer complement.
inline FracDecomp frac_centered(const Real& x) {
  Real r = boost::multiprecision::round(x);
  Real f = x - r;
  BigInt n = r.convert_to<BigInt>();
  if (f <= Real(-0.5)) {  // round() ties away from zero; fold -1/2 to +1/2
    f += 1;
    n -= 1;
  }
  return {f, n};
}

inline BigInt round_to_int(const Real& x) { return frac_centered(x).integer; }

// FNV-1a 64-bit, used to key output files to their configuration.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace ssm
