#pragma once

#include <compare>
#include <concepts>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace diversity {

/// Arbitrary-precision rational with an exactness flag.
///
/// Arithmetic on the stored rationals is always exact. The flag records whether
/// the stored value is the intended quantity (true) or an approximation of it,
/// e.g. a rounded Euclidean distance or a geometric mean evaluated in floating
/// point. Results are exact iff every operand was exact. Ordering and equality
/// look at the value only.
class Scalar {
public:
    Scalar() = default;

    template <std::integral T>
    Scalar(T value) : value_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)

    Scalar(long numerator, long denominator);
    explicit Scalar(mpq_class value, bool exact = true);

    /// Accepts "p", "p/q" and, when `allow_decimal`, decimal notation ("1.7", "-2e-3").
    /// Decimals are converted to their exact decimal value and flagged inexact.
    static Scalar parse(std::string_view text, bool allow_decimal = false);

    /// Exact binary value of `value`, flagged inexact. Throws on NaN/inf.
    static Scalar from_double(double value);

    const mpq_class& rational() const noexcept { return value_; }
    bool exact() const noexcept { return exact_; }
    Scalar as_inexact() const;

    double to_double() const { return value_.get_d(); }
    int sign() const { return sgn(value_); }
    bool is_zero() const { return sign() == 0; }

    Scalar abs() const;
    Scalar reciprocal() const;

    /// "p" for integers, "p/q" otherwise. Never rounds.
    std::string str() const;
    std::string numerator_str() const;
    std::string denominator_str() const;

    Scalar& operator+=(const Scalar& rhs);
    Scalar& operator-=(const Scalar& rhs);
    Scalar& operator*=(const Scalar& rhs);
    Scalar& operator/=(const Scalar& rhs);

    friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
    friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
    friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
    friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }
    Scalar operator-() const;

    friend bool operator==(const Scalar& a, const Scalar& b) { return cmp(a.value_, b.value_) == 0; }
    friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    mpq_class value_{0};
    bool exact_ = true;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

Scalar min(const Scalar& a, const Scalar& b);
Scalar max(const Scalar& a, const Scalar& b);

/// |a - b| <= tolerance * max(1, |a|, |b|); exact equality when tolerance is 0.
bool approx_equal(const Scalar& a, const Scalar& b, double tolerance);

}  // namespace diversity
