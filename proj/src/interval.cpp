#include <relbound/errors.hpp>
#include <relbound/interval.hpp>

#include <ostream>
#include <stdexcept>

namespace relbound
{

Interval::Interval(Rational point) : lo_(point), hi_(std::move(point)) {}

Interval::Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi))
{
    if (hi_ < lo_) {
        throw std::invalid_argument("empty interval [" + lo_.str() + ", " + hi_.str() + "]");
    }
}

Rational Interval::midpoint() const
{
    return (lo_ + hi_) * Rational(1, 2);
}

Rational Interval::radius() const
{
    return (hi_ - lo_) * Rational(1, 2);
}

Rational Interval::magnitude() const
{
    return max(abs(lo_), abs(hi_));
}

Rational Interval::min_magnitude() const
{
    if (contains_zero()) {
        return Rational(0);
    }
    return lo_.sign() > 0 ? lo_ : -hi_;
}

Interval Interval::operator-() const
{
    return Interval(-hi_, -lo_);
}

Interval operator+(const Interval &a, const Interval &b)
{
    return Interval(a.lo_ + b.lo_, a.hi_ + b.hi_);
}

Interval operator-(const Interval &a, const Interval &b)
{
    return Interval(a.lo_ - b.hi_, a.hi_ - b.lo_);
}

Interval operator*(const Interval &a, const Interval &b)
{
    if (a.is_point() && b.is_point()) {
        return Interval(a.lo_ * b.lo_);
    }
    const Rational p1 = a.lo_ * b.lo_;
    const Rational p2 = a.lo_ * b.hi_;
    const Rational p3 = a.hi_ * b.lo_;
    const Rational p4 = a.hi_ * b.hi_;
    return Interval(min(min(p1, p2), min(p3, p4)), max(max(p1, p2), max(p3, p4)));
}

Interval operator/(const Interval &a, const Interval &b)
{
    if (b.contains_zero()) {
        throw Error(ErrorKind::DivisionByZeroRange, "division by interval " + b.str() + " containing zero");
    }
    const Interval inv(Rational(1) / b.hi_, Rational(1) / b.lo_);
    return a * inv;
}

std::string Interval::str() const
{
    return "[" + lo_.str() + ", " + hi_.str() + "]";
}

namespace
{

bool perfect_square(const mpz_class &z, mpz_class &root)
{
    if (z < 0) {
        return false;
    }
    mpz_sqrt(root.get_mpz_t(), z.get_mpz_t());
    return root * root == z;
}

} // namespace

Interval rat_sqrt_outward(const Rational &a, int precision_bits)
{
    if (a.sign() < 0) {
        throw Error(ErrorKind::NegativeSqrt, "square root of negative value " + a.str());
    }
    if (a.is_zero()) {
        return Interval(Rational(0));
    }
    mpz_class rn;
    mpz_class rd;
    if (perfect_square(a.numerator(), rn) && perfect_square(a.denominator(), rd)) {
        return Interval(Rational(mpq_class(rn, rd)));
    }
    // floor(sqrt(a * 4^K)) = isqrt(floor(a * 4^K)); the enclosure has dyadic endpoints.
    const long k = precision_bits < 1 ? 1 : precision_bits;
    const Rational scaled = a * Rational::pow2(2 * k);
    const mpz_class fl = scaled.floor();
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), fl.get_mpz_t());
    const Rational unit = Rational::pow2(-k);
    const Rational lo = Rational(s) * unit;
    if (s * s == fl && scaled.is_integer()) {
        return Interval(lo);
    }
    return Interval(lo, Rational(mpz_class(s + 1)) * unit);
}

Interval sqrt(const Interval &x, int precision_bits)
{
    if (x.lo().sign() < 0) {
        throw Error(ErrorKind::NegativeSqrt, "square root of interval " + x.str() + " with negative part");
    }
    const Interval l = rat_sqrt_outward(x.lo(), precision_bits);
    if (x.is_point()) {
        return l;
    }
    const Interval h = rat_sqrt_outward(x.hi(), precision_bits);
    return Interval(l.lo(), h.hi());
}

Interval abs(const Interval &x)
{
    if (x.lo().sign() >= 0) {
        return x;
    }
    if (x.hi().sign() <= 0) {
        return -x;
    }
    return Interval(Rational(0), x.magnitude());
}

Interval hull(const Interval &a, const Interval &b)
{
    return Interval(min(a.lo(), b.lo()), max(a.hi(), b.hi()));
}

std::optional<Interval> intersect(const Interval &a, const Interval &b)
{
    const Rational &lo = max(a.lo(), b.lo());
    const Rational &hi = min(a.hi(), b.hi());
    if (hi < lo) {
        return std::nullopt;
    }
    return Interval(lo, hi);
}

Interval square(const Interval &x)
{
    const Interval a = abs(x);
    return Interval(a.lo() * a.lo(), a.hi() * a.hi());
}

std::ostream &operator<<(std::ostream &os, const Interval &x)
{
    return os << x.str();
}

} // namespace relbound
