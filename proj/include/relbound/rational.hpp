#ifndef RELBOUND_RATIONAL_HPP
#define RELBOUND_RATIONAL_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace relbound
{

// Exact arbitrary-precision fraction, always kept in canonical form
// (positive denominator, numerator and denominator coprime).
class Rational
{
public:
    Rational() = default;
    Rational(int v) : q_(static_cast<long>(v)) {}
    Rational(long v) : q_(v) {}
    Rational(long long v);
    Rational(long num, long den);
    explicit Rational(const mpz_class &z) : q_(z) {}
    explicit Rational(mpq_class q);

    // Exact value of a finite double.
    static Rational from_double(double d);
    // 2^e for any integer e.
    static Rational pow2(long e);
    // Decimal literal: digits with optional fraction and exponent ("6.0", "0.1", "1e-3").
    static Rational parse_decimal(std::string_view text);
    // "p/q" or integer, as produced by str().
    static Rational parse_fraction(std::string_view text);

    Rational operator-() const;
    Rational &operator+=(const Rational &o);
    Rational &operator-=(const Rational &o);
    Rational &operator*=(const Rational &o);
    // Throws Error(DivisionByZero) when o == 0.
    Rational &operator/=(const Rational &o);

    friend Rational operator+(Rational a, const Rational &b)
    {
        return a += b;
    }
    friend Rational operator-(Rational a, const Rational &b)
    {
        return a -= b;
    }
    friend Rational operator*(Rational a, const Rational &b)
    {
        return a *= b;
    }
    friend Rational operator/(Rational a, const Rational &b)
    {
        return a /= b;
    }

    friend bool operator==(const Rational &a, const Rational &b)
    {
        return a.q_ == b.q_;
    }
    friend std::strong_ordering operator<=>(const Rational &a, const Rational &b)
    {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    int sign() const
    {
        return sgn(q_);
    }
    bool is_zero() const
    {
        return sign() == 0;
    }
    bool is_integer() const
    {
        return q_.get_den() == 1;
    }

    mpz_class numerator() const
    {
        return q_.get_num();
    }
    mpz_class denominator() const
    {
        return q_.get_den();
    }
    std::size_t numerator_bits() const;
    std::size_t denominator_bits() const;

    mpz_class floor() const;
    mpz_class ceil() const;

    // floor(log2(|x|)) for x != 0.
    long ilog2() const;

    // Truncating conversion; use round_to_precision for correctly rounded values.
    double to_double_approx() const
    {
        return q_.get_d();
    }

    // Canonical "p/q" (or "p" when integral).
    std::string str() const;
    // Exact decimal expansion when the denominator is 2^a*5^b, otherwise std::nullopt-like empty string.
    std::string exact_decimal() const;

    const mpq_class &raw() const
    {
        return q_;
    }

private:
    mpq_class q_;
};

Rational abs(const Rational &a);
const Rational &min(const Rational &a, const Rational &b);
const Rational &max(const Rational &a, const Rational &b);

// Scientific decimal with `digits` significant digits, rounded away from zero
// (upward == true) or toward zero, so the printed value brackets the exact one.
std::string to_scientific(const Rational &x, int digits = 5, bool upward = true);

std::ostream &operator<<(std::ostream &os, const Rational &r);

} // namespace relbound

#endif
