#include "ckem/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>

#include "ckem/errors.hpp"

namespace ckem {

namespace mp = boost::multiprecision;

Rational to_rational(double x) {
    if (!std::isfinite(x)) throw InputError("non-finite number cannot be made exact");
    if (x == 0.0) return Rational(0);
    int exponent = 0;
    const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent, 0.5 <= |m| < 1
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
    exponent -= 53;
    BigInt num = scaled;
    if (exponent >= 0) return Rational(num << exponent);
    BigInt den = 1;
    den <<= -exponent;
    return Rational(num, den);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
    if (digits.empty()) throw InputError("malformed number '" + std::string(whole) + "'");
    BigInt value = 0;
    for (char ch : digits) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw InputError("malformed number '" + std::string(whole) + "'");
        value = value * 10 + (ch - '0');
    }
    return value;
}

BigInt pow10(long n) {
    BigInt r = 1;
    for (long i = 0; i < n; ++i) r *= 10;
    return r;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view es = s.substr(e + 1);
        s = s.substr(0, e);
        bool eneg = false;
        if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
            eneg = es.front() == '-';
            es.remove_prefix(1);
        }
        if (es.empty() || es.size() > 6) throw InputError("malformed exponent in '" + std::string(whole) + "'");
        const BigInt ev = parse_integer(es, whole);
        exp10 = ev.convert_to<long>();
        if (eneg) exp10 = -exp10;
    }
    std::string digits;
    long frac_digits = 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
        frac_digits = static_cast<long>(s.size() - dot - 1);
    } else {
        digits = std::string(s);
    }
    Rational value(parse_integer(digits, whole));
    exp10 -= frac_digits;
    if (exp10 > 0) value *= Rational(pow10(exp10));
    if (exp10 < 0) value /= Rational(pow10(-exp10));
    return negative ? Rational(-value) : value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const std::string_view s = trim(text);
    if (s.empty()) throw InputError("empty number");
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        const Rational num = parse_decimal(trim(s.substr(0, slash)), text);
        const Rational den = parse_decimal(trim(s.substr(slash + 1)), text);
        if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }
    return parse_decimal(s, text);
}

std::string to_string(const Rational& q) {
    const BigInt num = mp::numerator(q);
    const BigInt den = mp::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational rational_gcd(const Rational& a, const Rational& b) {
    const Rational x = abs(a), y = abs(b);
    if (x == 0) return y;
    if (y == 0) return x;
    // gcd(p/q, r/s) = gcd(p*s, r*q) / (q*s) with everything in lowest terms
    const BigInt p = mp::numerator(x), q = mp::denominator(x);
    const BigInt r = mp::numerator(y), s = mp::denominator(y);
    const BigInt g = mp::gcd(BigInt(p * s), BigInt(r * q));
    return Rational(g, BigInt(q * s));
}

}  // namespace ckem
