#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "forkrep/errors.hpp"

namespace forkrep {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "num/den" or a bare integer "num". Decimal and exponent forms are rejected.
inline Rational parse_rational(std::string_view text)
{
    auto digits = [](std::string_view s, bool allow_sign) {
        if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+'))
            s.remove_prefix(1);
        if (s.empty())
            return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                return false;
        return true;
    };

    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
    if (!digits(num, true) || !digits(den, false))
        throw ParseError("not an exact rational literal: '" + std::string(text) + "'");

    std::string num_str(num);
    if (!num_str.empty() && num_str.front() == '+')
        num_str.erase(0, 1);
    Integer n(num_str, 10);
    Integer d(std::string(den), 10);
    if (d == 0)
        throw ParseError("zero denominator in rational: '" + std::string(text) + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

/// Lowest-terms "num/den"; integers keep the explicit "/1".
inline std::string format_rational(const Rational& value)
{
    Rational q(value);
    q.canonicalize();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Exact non-negative integer power.
inline Rational pow(const Rational& base, unsigned long exponent)
{
    Rational result;
    mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
    result.canonicalize();
    return result;
}

inline int sign(const Rational& value) { return sgn(value); }

} // namespace forkrep
