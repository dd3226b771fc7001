#include <relbound/errors.hpp>
#include <relbound/precision.hpp>

namespace relbound
{

Rational PrecisionSpec::max_finite() const
{
    return (Rational(2) - Rational::pow2(1 - significand_bits)) * Rational::pow2(max_exponent);
}

PrecisionSpec PrecisionSpec::float32()
{
    return PrecisionSpec{"float32", 24, -126, 127};
}

PrecisionSpec PrecisionSpec::float64()
{
    return PrecisionSpec{"float64", 53, -1022, 1023};
}

PrecisionSpec PrecisionSpec::by_name(std::string_view name)
{
    if (name == "float64" || name == "double" || name == "Float64") {
        return float64();
    }
    if (name == "float32" || name == "single" || name == "Float32") {
        return float32();
    }
    throw Error(ErrorKind::Usage, "unknown precision '" + std::string(name) + "' (expected float32 or float64)");
}

Rational round_to_precision(const Rational &x, const PrecisionSpec &prec)
{
    if (x.is_zero()) {
        return x;
    }
    const Rational mag = abs(x);
    long e = mag.ilog2();
    if (e < prec.min_exponent) {
        e = prec.min_exponent; // subnormal range: fixed quantum
    }
    const Rational quantum = Rational::pow2(e - (prec.significand_bits - 1));
    const Rational scaled = mag / quantum;
    mpz_class n = scaled.floor();
    const Rational frac = scaled - Rational(n);
    const Rational half(1, 2);
    if (frac > half || (frac == half && mpz_odd_p(n.get_mpz_t()))) {
        n += 1;
    }
    Rational rounded = Rational(n) * quantum;
    if (rounded > prec.max_finite()) {
        throw Error(ErrorKind::Overflow, "value " + x.str() + " overflows " + prec.name);
    }
    return x.sign() < 0 ? -rounded : rounded;
}

double to_nearest_double(const Rational &x)
{
    return round_to_precision(x, PrecisionSpec::float64()).to_double_approx();
}

float to_nearest_float(const Rational &x)
{
    // The float-rounded value is exactly representable as a double.
    return static_cast<float>(round_to_precision(x, PrecisionSpec::float32()).to_double_approx());
}

} // namespace relbound
