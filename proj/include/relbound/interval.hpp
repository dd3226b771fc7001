#ifndef RELBOUND_INTERVAL_HPP
#define RELBOUND_INTERVAL_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include <relbound/rational.hpp>

namespace relbound
{

// Closed interval [lo, hi] with exact rational endpoints.
class Interval
{
public:
    Interval() = default;
    Interval(Rational point);
    // Throws std::invalid_argument when lo > hi.
    Interval(Rational lo, Rational hi);

    const Rational &lo() const
    {
        return lo_;
    }
    const Rational &hi() const
    {
        return hi_;
    }

    Rational width() const
    {
        return hi_ - lo_;
    }
    Rational midpoint() const;
    Rational radius() const;
    bool contains_zero() const
    {
        return lo_.sign() <= 0 && hi_.sign() >= 0;
    }
    bool contains(const Rational &x) const
    {
        return lo_ <= x && x <= hi_;
    }
    bool subset_of(const Interval &o) const
    {
        return o.lo_ <= lo_ && hi_ <= o.hi_;
    }
    bool is_point() const
    {
        return lo_ == hi_;
    }
    // max(|lo|, |hi|)
    Rational magnitude() const;
    // min |x| over the interval; 0 when it contains zero.
    Rational min_magnitude() const;

    Interval operator-() const;
    friend Interval operator+(const Interval &a, const Interval &b);
    friend Interval operator-(const Interval &a, const Interval &b);
    friend Interval operator*(const Interval &a, const Interval &b);
    // Throws Error(DivisionByZeroRange) when b contains zero.
    friend Interval operator/(const Interval &a, const Interval &b);

    friend bool operator==(const Interval &a, const Interval &b) = default;

    std::string str() const;

private:
    Rational lo_;
    Rational hi_;
};

// [l, h] with l <= sqrt(a) <= h, h - l <= 2^-precision_bits; exact when a is a
// square of a rational. Throws Error(NegativeSqrt) for a < 0.
Interval rat_sqrt_outward(const Rational &a, int precision_bits);

// Throws Error(NegativeSqrt) when x.lo() < 0.
Interval sqrt(const Interval &x, int precision_bits);
Interval abs(const Interval &x);
Interval hull(const Interval &a, const Interval &b);
std::optional<Interval> intersect(const Interval &a, const Interval &b);
Interval square(const Interval &x);

std::ostream &operator<<(std::ostream &os, const Interval &x);

} // namespace relbound

#endif
