#include "diversity/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace diversity {

namespace {

bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

mpz_class parse_integer(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    return mpz_class(std::string(s), 10);
}

// [sign] digits [. digits] [e|E [sign] digits]
mpq_class parse_decimal(std::string_view s) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    std::string digits;
    long scale = 0;
    std::size_t i = 0;
    bool seen_digit = false;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
        digits.push_back(s[i]);
        seen_digit = true;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
            digits.push_back(s[i]);
            --scale;
            seen_digit = true;
        }
    }
    if (!seen_digit) throw std::invalid_argument("not a number");
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::string_view exponent = s.substr(i + 1);
        if (!is_integer_literal(exponent)) throw std::invalid_argument("bad exponent");
        scale += std::stol(std::string(exponent));
        i = s.size();
    }
    if (i != s.size()) throw std::invalid_argument("trailing characters");

    mpz_class mantissa(digits, 10);
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    mpq_class value = scale < 0 ? mpq_class(mantissa, power) : mpq_class(mantissa * power);
    value.canonicalize();
    return negative ? mpq_class(-value) : value;
}

}  // namespace

Scalar::Scalar(long numerator, long denominator) {
    if (denominator == 0) throw std::domain_error("zero denominator");
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
}

Scalar::Scalar(mpq_class value, bool exact) : value_(std::move(value)), exact_(exact) {
    value_.canonicalize();
}

Scalar Scalar::parse(std::string_view text, bool allow_decimal) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    const std::string original(text);
    if (text.empty()) throw std::invalid_argument("empty number");

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto num = text.substr(0, slash);
        const auto den = text.substr(slash + 1);
        if (!is_integer_literal(num) || !is_integer_literal(den)) {
            throw std::invalid_argument("malformed rational '" + original + "'");
        }
        mpz_class d = parse_integer(den);
        if (d == 0) throw std::domain_error("zero denominator in '" + original + "'");
        return Scalar(mpq_class(parse_integer(num), d));
    }
    if (is_integer_literal(text)) return Scalar(mpq_class(parse_integer(text)));
    if (!allow_decimal) {
        throw std::invalid_argument("inexact decimal '" + original +
                                    "' rejected (write p/q or enable float ingestion)");
    }
    try {
        return Scalar(parse_decimal(text), false);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed number '" + original + "'");
    }
}

Scalar Scalar::from_double(double value) {
    if (!std::isfinite(value)) throw std::domain_error("non-finite value");
    return Scalar(mpq_class(value), false);
}

Scalar Scalar::as_inexact() const {
    Scalar copy = *this;
    copy.exact_ = false;
    return copy;
}

Scalar Scalar::abs() const {
    Scalar copy = *this;
    if (copy.value_ < 0) copy.value_ = -copy.value_;
    return copy;
}

Scalar Scalar::reciprocal() const {
    if (is_zero()) throw std::domain_error("reciprocal of zero");
    Scalar copy = *this;
    mpq_inv(copy.value_.get_mpq_t(), value_.get_mpq_t());
    return copy;
}

std::string Scalar::str() const {
    if (value_.get_den() == 1) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Scalar::numerator_str() const { return value_.get_num().get_str(); }
std::string Scalar::denominator_str() const { return value_.get_den().get_str(); }

Scalar& Scalar::operator+=(const Scalar& rhs) {
    value_ += rhs.value_;
    exact_ = exact_ && rhs.exact_;
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
    value_ -= rhs.value_;
    exact_ = exact_ && rhs.exact_;
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
    value_ *= rhs.value_;
    exact_ = exact_ && rhs.exact_;
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
    if (rhs.is_zero()) throw std::domain_error("division by zero");
    value_ /= rhs.value_;
    exact_ = exact_ && rhs.exact_;
    return *this;
}

Scalar Scalar::operator-() const {
    Scalar copy = *this;
    copy.value_ = -copy.value_;
    return copy;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

Scalar min(const Scalar& a, const Scalar& b) { return b < a ? b : a; }
Scalar max(const Scalar& a, const Scalar& b) { return a < b ? b : a; }

bool approx_equal(const Scalar& a, const Scalar& b, double tolerance) {
    if (tolerance <= 0.0) return a == b;
    const double scale = std::max({1.0, std::fabs(a.to_double()), std::fabs(b.to_double())});
    return (a - b).abs().to_double() <= tolerance * scale;
}

}  // namespace diversity
