#ifndef RELBOUND_PRECISION_HPP
#define RELBOUND_PRECISION_HPP

#include <string>
#include <string_view>

#include <relbound/rational.hpp>

namespace relbound
{

// Binary IEEE-754 style format. epsilon bounds the relative rounding error of
// normal results, delta the absolute rounding error of subnormal results.
struct PrecisionSpec {
    std::string name;
    int significand_bits; // including the implicit bit
    int min_exponent;     // exponent of the smallest normal number
    int max_exponent;     // exponent of the largest finite number

    Rational epsilon() const
    {
        return Rational::pow2(-significand_bits);
    }
    Rational delta() const
    {
        return Rational::pow2(min_exponent - significand_bits);
    }
    Rational min_normal() const
    {
        return Rational::pow2(min_exponent);
    }
    // (2 - 2^(1-p)) * 2^emax
    Rational max_finite() const;

    static PrecisionSpec float32();
    static PrecisionSpec float64();
    // "float32" / "float64" (also "single" / "double"); throws Error(Usage) otherwise.
    static PrecisionSpec by_name(std::string_view name);
};

// Round-to-nearest-even of x in the given format. Throws Error(Overflow) when
// the rounded magnitude exceeds max_finite().
Rational round_to_precision(const Rational &x, const PrecisionSpec &prec);

inline bool is_representable(const Rational &x, const PrecisionSpec &prec)
{
    return round_to_precision(x, prec) == x;
}

// Correctly rounded conversion to double / float.
double to_nearest_double(const Rational &x);
float to_nearest_float(const Rational &x);

} // namespace relbound

#endif
