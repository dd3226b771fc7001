#ifndef RELBOUND_AFFINE_HPP
#define RELBOUND_AFFINE_HPP

#include <atomic>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <relbound/interval.hpp>
#include <relbound/rational.hpp>

namespace relbound
{

// Monotone generator of fresh noise symbols. Thread-safe.
class NoiseSource
{
public:
    explicit NoiseSource(std::int64_t first = 0) : next_(first) {}
    NoiseSource(const NoiseSource &) = delete;
    NoiseSource &operator=(const NoiseSource &) = delete;

    std::int64_t fresh()
    {
        return next_.fetch_add(1, std::memory_order_relaxed);
    }

private:
    std::atomic<std::int64_t> next_;
};

// center + sum_i coef_i * noise_i with every noise_i ranging over [-1, 1].
// Terms are kept sorted by noise index, without zero coefficients.
class AffineForm
{
public:
    using Term = std::pair<std::int64_t, Rational>;

    AffineForm() = default;
    AffineForm(Rational center) : center_(std::move(center)) {}
    AffineForm(Rational center, std::vector<Term> terms);

    // Center at the midpoint, a single fresh term with coefficient = radius.
    static AffineForm from_interval(const Interval &x, NoiseSource &src);

    const Rational &center() const
    {
        return center_;
    }
    const std::vector<Term> &terms() const
    {
        return terms_;
    }
    // sum |coef_i|
    Rational radius() const;
    Interval to_interval() const;
    // Value at a noise assignment; missing indices count as 0.
    Rational evaluate(const std::vector<std::pair<std::int64_t, Rational>> &noise) const;

    AffineForm operator-() const;
    friend AffineForm operator+(const AffineForm &a, const AffineForm &b);
    friend AffineForm operator-(const AffineForm &a, const AffineForm &b);
    AffineForm scale(const Rational &c) const;
    AffineForm shift(const Rational &c) const;
    // Adds a fresh term with coefficient |magnitude|.
    AffineForm add_noise(const Rational &magnitude, NoiseSource &src) const;

    // Rounds coefficients whose denominator exceeds max_denominator_bits onto a
    // dyadic grid and moves the rounding slack into one fresh term (widening only).
    AffineForm compact(NoiseSource &src, std::size_t max_denominator_bits = 512) const;

    std::string str() const;

private:
    Rational center_;
    std::vector<Term> terms_;
};

// Linear part exact, nonlinear remainder bounded by radius(a) * radius(b) in a fresh term.
AffineForm mul(const AffineForm &a, const AffineForm &b, NoiseSource &src);
// a * [lo, hi] = mid * a + fresh term of magnitude rad * (|center| + radius(a)).
AffineForm mul(const AffineForm &a, const Interval &k, NoiseSource &src);
// Min-range linearization of 1/y. Throws Error(DivisionByZeroRange) if 0 is in range(y).
AffineForm inverse(const AffineForm &y, NoiseSource &src);
AffineForm div(const AffineForm &a, const AffineForm &b, NoiseSource &src);
// Min-range linearization of sqrt with a rational slope. Throws Error(NegativeSqrt).
AffineForm sqrt(const AffineForm &y, NoiseSource &src, int precision_bits);

} // namespace relbound

#endif
