#ifndef RELBOUND_TESTS_ORACLE_HPP
#define RELBOUND_TESTS_ORACLE_HPP

#include <optional>
#include <random>
#include <vector>

#include <relbound/box.hpp>
#include <relbound/errors.hpp>
#include <relbound/eval.hpp>
#include <relbound/precision.hpp>

namespace relbound::testing
{

// Observed roundoff at one real input point: the float program runs on the
// rounded inputs, the reference on the exact ones.
struct Observed {
    Rational abs;                // certified lower bound on |f^ - f|
    std::optional<Rational> rel; // abs / |f| when f is certainly nonzero
};

inline std::optional<Observed> observe(const Expr &body, const PrecisionSpec &prec, const std::vector<Rational> &x)
{
    std::vector<double> xs;
    for (const auto &v : x) {
        xs.push_back(prec.significand_bits == 24 ? double(to_nearest_float(v)) : to_nearest_double(v));
    }
    try {
        const ExactValue exact = eval_rational(body, x);
        const double got = eval_float(body, xs, prec);
        Observed o;
        o.abs = max(Rational(0), abs(Rational::from_double(got) - exact.value) - exact.radius);
        const Rational lo = abs(exact.value) - exact.radius;
        if (lo.sign() > 0) {
            o.rel = o.abs / (abs(exact.value) + exact.radius);
        }
        return o;
    } catch (const Error &) {
        return std::nullopt;
    }
}

// Random point with odd denominators so inputs usually need rounding.
inline std::vector<Rational> random_point(std::mt19937_64 &rng, const Box &box)
{
    std::uniform_int_distribution<long> k(0, 3 * 7 * 11 * 13 * 1024);
    std::vector<Rational> x;
    for (std::size_t i = 0; i < box.size(); ++i) {
        x.push_back(box[i].lo() + box[i].width() * Rational(k(rng), 3 * 7 * 11 * 13 * 1024));
    }
    return x;
}

} // namespace relbound::testing

#endif
