#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssm/common.hpp"

namespace ssm::algebraic {

namespace detail {

// gcd of rational polynomials (index = power), each step normalized monic.
inline std::vector<BigRational> poly_mod(std::vector<BigRational> a, const std::vector<BigRational>& b) {
  while (a.size() >= b.size() && !a.empty()) {
    BigRational q = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

inline std::vector<BigRational> poly_gcd(std::vector<BigRational> a, std::vector<BigRational> b) {
  while (!b.empty()) {
    auto r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const BigRational lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

}  // namespace detail

// Monic integer polynomial X^d + c_{d-1} X^{d-1} + ... + c_0, d >= 2.
// Stored as the lower coefficients c_0..c_{d-1}; the leading 1 is implicit.
class MonicIntPolynomial {
 public:
  explicit MonicIntPolynomial(std::vector<BigInt> lower_coeffs) : c_(std::move(lower_coeffs)) {
    if (c_.size() < 2)
      throw std::invalid_argument("polynomial: degree must be at least 2");
  }

  // Input lists every coefficient constant-first and must end with the leading
  // 1, e.g. "1,10,1,1" is 1 + 10X + X^2 + X^3.
  static MonicIntPolynomial parse(const std::string& text) {
    std::vector<BigInt> all;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
      const auto first = token.find_first_not_of(" \t");
      const auto last = token.find_last_not_of(" \t");
      if (first == std::string::npos)
        throw std::invalid_argument("polynomial: empty coefficient in '" + text + "'");
      token = token.substr(first, last - first + 1);
      if (token.find_first_not_of("+-0123456789") != std::string::npos ||
          token.find_first_of("0123456789") == std::string::npos)
        throw std::invalid_argument("polynomial: bad coefficient '" + token + "'");
      all.emplace_back(token);
    }
    if (all.size() < 3)
      throw std::invalid_argument("polynomial: need degree >= 2 (constant-first, leading 1 included)");
    if (all.back() != 1)
      throw std::invalid_argument("polynomial: leading coefficient must be 1");
    all.pop_back();
    return MonicIntPolynomial(std::move(all));
  }

  int degree() const { return static_cast<int>(c_.size()); }

  // i in [0, degree]; coeff(degree) == 1.
  BigInt coeff(int i) const {
    if (i < 0 || i > degree()) throw std::out_of_range("polynomial: coefficient index");
    if (i == degree()) return 1;
    return c_[static_cast<std::size_t>(i)];
  }

  const std::vector<BigInt>& lower_coeffs() const { return c_; }

  template <typename T>
  T eval(const T& z) const {
    T acc(1);
    for (int i = degree() - 1; i >= 0; --i) acc = acc * z + T(Real(c_[static_cast<std::size_t>(i)]));
    return acc;
  }

  BigInt eval_exact(const BigInt& x) const {
    BigInt acc = 1;
    for (int i = degree() - 1; i >= 0; --i) acc = acc * x + c_[static_cast<std::size_t>(i)];
    return acc;
  }

  template <typename T>
  T eval_derivative(const T& z) const {
    const int d = degree();
    T acc(d);
    for (int i = d - 1; i >= 1; --i)
      acc = acc * z + T(Real(i * c_[static_cast<std::size_t>(i)]));
    return acc;
  }

  // X^d f(1/X), normalized monic; requires |c_0| = 1.
  MonicIntPolynomial reciprocal() const {
    if (c_[0] != 1 && c_[0] != -1)
      throw std::domain_error("polynomial: reciprocal needs constant term 1 or -1");
    const int d = degree();
    const BigInt sign = c_[0];  // leading coefficient of the reversed polynomial
    std::vector<BigInt> lower(static_cast<std::size_t>(d));
    lower[0] = sign;  // constant term = sign * c_d = sign
    for (int j = 1; j < d; ++j)
      lower[static_cast<std::size_t>(j)] = sign * c_[static_cast<std::size_t>(d - j)];
    return MonicIntPolynomial(std::move(lower));
  }

  bool is_square_free() const {
    std::vector<BigRational> f(c_.begin(), c_.end());
    f.emplace_back(1);
    std::vector<BigRational> fp;
    for (std::size_t i = 1; i < f.size(); ++i) fp.push_back(BigRational(i) * f[i]);
    return detail::poly_gcd(f, fp).size() <= 1;
  }

  // Integer roots (= all rational roots, by monicity). Divisor enumeration of
  // the constant term; refuses beyond 10^12 instead of guessing.
  std::vector<BigInt> integer_roots() const {
    std::vector<BigInt> found;
    if (c_[0] == 0) {
      found.push_back(0);
      // remaining integer roots divide the first nonzero coefficient; keep it
      // simple: deflate by X and recurse only while degree permits.
      std::vector<BigInt> rest(c_.begin() + 1, c_.end());
      if (rest.size() >= 2) {
        for (const auto& r : MonicIntPolynomial(rest).integer_roots())
          if (r != 0) found.push_back(r);
      } else if (rest.size() == 1) {
        // X + rest[0]
        found.push_back(-rest[0]);
      }
      std::sort(found.begin(), found.end());
      found.erase(std::unique(found.begin(), found.end()), found.end());
      return found;
    }
    BigInt a0 = c_[0] < 0 ? BigInt(-c_[0]) : c_[0];
    if (a0 > BigInt("1000000000000"))
      throw std::domain_error("polynomial: constant term too large for divisor enumeration");
    std::vector<BigInt> divisors;
    for (BigInt i = 1; i * i <= a0; ++i) {
      if (a0 % i == 0) {
        divisors.push_back(i);
        divisors.push_back(a0 / i);
      }
    }
    for (const auto& dvs : divisors) {
      for (int s = -1; s <= 1; s += 2) {
        BigInt cand = s * dvs;
        if (eval_exact(cand) == 0) found.push_back(cand);
      }
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return found;
  }

  // Conclusive for degree <= 3 (a cubic or quadratic factors iff it has a
  // linear factor); nullopt when the question is out of scope here.
  std::optional<bool> is_irreducible() const {
    std::vector<BigInt> roots;
    try {
      roots = integer_roots();
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
    if (!roots.empty()) return false;
    if (degree() <= 3) return true;
    return std::nullopt;
  }

  std::string to_string() const {
    std::ostringstream out;
    out << "X^" << degree();
    for (int i = degree() - 1; i >= 0; --i) {
      const BigInt& ci = c_[static_cast<std::size_t>(i)];
      if (ci == 0) continue;
      const bool neg = ci < 0;
      BigInt mag = neg ? BigInt(-ci) : ci;
      out << (neg ? " - " : " + ");
      if (i == 0) {
        out << mag;
      } else {
        if (mag != 1) out << mag;
        out << "X";
        if (i > 1) out << "^" << i;
      }
    }
    return out.str();
  }

  bool operator==(const MonicIntPolynomial& other) const { return c_ == other.c_; }

 private:
  std::vector<BigInt> c_;
};

}  // namespace ssm::algebraic
