#ifndef RELBOUND_TESTS_SUPPORT_HPP
#define RELBOUND_TESTS_SUPPORT_HPP

#include <random>

#include <relbound/interval.hpp>
#include <relbound/rational.hpp>

namespace relbound::testing
{

// Rational with a small random numerator and power-of-two or odd denominator.
inline Rational random_rational(std::mt19937_64 &rng, long span = 1000)
{
    std::uniform_int_distribution<long> num(-span * 64, span * 64);
    std::uniform_int_distribution<long> den(1, 97);
    return Rational(num(rng), den(rng));
}

inline Interval random_interval(std::mt19937_64 &rng, long span = 1000)
{
    Rational a = random_rational(rng, span);
    Rational b = random_rational(rng, span);
    return a <= b ? Interval(a, b) : Interval(b, a);
}

// Uniform rational in x on a 2^-20 grid.
inline Rational random_in(std::mt19937_64 &rng, const Interval &x)
{
    std::uniform_int_distribution<long> k(0, 1L << 20);
    return x.lo() + x.width() * Rational(k(rng), 1L << 20);
}

} // namespace relbound::testing

#endif
