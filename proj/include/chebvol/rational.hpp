#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace chebvol {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

inline BigInt num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt den(const Rational& q) { return boost::multiprecision::denominator(q); }

/// p-adic valuation of a nonzero rational.
inline long padic_valuation(const Rational& q, long long p) {
    if (q == 0) throw std::invalid_argument("padic_valuation: zero has no finite valuation");
    if (p < 2) throw std::invalid_argument("padic_valuation: p must be >= 2");
    long v = 0;
    BigInt n = num(q) < 0 ? BigInt(-num(q)) : num(q);
    BigInt d = den(q);
    while (n % p == 0) { n /= p; ++v; }
    while (d % p == 0) { d /= p; --v; }
    return v;
}

inline bool is_prime(long long p) {
    if (p < 2) return false;
    for (long long q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

/// Parses "a", "-a", or "a/b" with b > 0 after normalization.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt n(s.substr(0, slash)), d(s.substr(slash + 1));
        if (d == 0) throw std::invalid_argument("zero denominator");
        return Rational(n, d);
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_rational: malformed rational '" + s + "'");
    }
}

inline std::string to_string(const Rational& q) {
    if (den(q) == 1) return num(q).str();
    return num(q).str() + "/" + den(q).str();
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline long long rational_floor(const Rational& q) {
    return floor_div(num(q), den(q)).template convert_to<long long>();
}

inline long long rational_ceil(const Rational& q) { return -rational_floor(-q); }

}  // namespace chebvol
