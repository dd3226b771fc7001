#include <relbound/affine.hpp>
#include <relbound/errors.hpp>

#include <algorithm>
#include <map>

namespace relbound
{

AffineForm::AffineForm(Rational center, std::vector<Term> terms) : center_(std::move(center))
{
    std::map<std::int64_t, Rational> merged;
    for (auto &[idx, coef] : terms) {
        merged[idx] += coef;
    }
    for (auto &[idx, coef] : merged) {
        if (!coef.is_zero()) {
            terms_.emplace_back(idx, std::move(coef));
        }
    }
}

AffineForm AffineForm::from_interval(const Interval &x, NoiseSource &src)
{
    AffineForm f(x.midpoint());
    const Rational r = x.radius();
    if (!r.is_zero()) {
        f.terms_.emplace_back(src.fresh(), r);
    }
    return f;
}

Rational AffineForm::radius() const
{
    Rational r;
    for (const auto &t : terms_) {
        r += abs(t.second);
    }
    return r;
}

Interval AffineForm::to_interval() const
{
    const Rational r = radius();
    return Interval(center_ - r, center_ + r);
}

Rational AffineForm::evaluate(const std::vector<std::pair<std::int64_t, Rational>> &noise) const
{
    Rational v = center_;
    for (const auto &[idx, coef] : terms_) {
        for (const auto &[nidx, val] : noise) {
            if (nidx == idx) {
                v += coef * val;
                break;
            }
        }
    }
    return v;
}

namespace
{

// Merge two sorted term lists: a + sign * b.
std::vector<AffineForm::Term> merge(const std::vector<AffineForm::Term> &a, const std::vector<AffineForm::Term> &b,
                                    bool subtract)
{
    std::vector<AffineForm::Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, subtract ? -b[j].second : b[j].second);
            ++j;
        } else {
            Rational c = subtract ? a[i].second - b[j].second : a[i].second + b[j].second;
            if (!c.is_zero()) {
                out.emplace_back(a[i].first, std::move(c));
            }
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace

AffineForm AffineForm::operator-() const
{
    AffineForm r(-center_);
    r.terms_.reserve(terms_.size());
    for (const auto &[idx, coef] : terms_) {
        r.terms_.emplace_back(idx, -coef);
    }
    return r;
}

AffineForm operator+(const AffineForm &a, const AffineForm &b)
{
    AffineForm r(a.center_ + b.center_);
    r.terms_ = merge(a.terms_, b.terms_, false);
    return r;
}

AffineForm operator-(const AffineForm &a, const AffineForm &b)
{
    AffineForm r(a.center_ - b.center_);
    r.terms_ = merge(a.terms_, b.terms_, true);
    return r;
}

AffineForm AffineForm::scale(const Rational &c) const
{
    if (c.is_zero()) {
        return AffineForm(Rational(0));
    }
    AffineForm r(center_ * c);
    r.terms_.reserve(terms_.size());
    for (const auto &[idx, coef] : terms_) {
        r.terms_.emplace_back(idx, coef * c);
    }
    return r;
}

AffineForm AffineForm::shift(const Rational &c) const
{
    AffineForm r = *this;
    r.center_ += c;
    return r;
}

AffineForm AffineForm::add_noise(const Rational &magnitude, NoiseSource &src) const
{
    AffineForm r = *this;
    if (!magnitude.is_zero()) {
        r.terms_.emplace_back(src.fresh(), abs(magnitude)); // fresh index is the largest so far
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term &x, const Term &y) { return x.first < y.first; });
    }
    return r;
}

AffineForm AffineForm::compact(NoiseSource &src, std::size_t max_denominator_bits) const
{
    const long grid = static_cast<long>(max_denominator_bits) - 1;
    const Rational unit = Rational::pow2(-grid);
    Rational slack;
    auto round_coef = [&](const Rational &c) {
        if (c.denominator_bits() <= max_denominator_bits) {
            return c;
        }
        const Rational scaled = c / unit;
        const Rational r = Rational(scaled.floor()) * unit;
        slack += abs(c - r);
        return r;
    };
    AffineForm out(round_coef(center_));
    for (const auto &[idx, coef] : terms_) {
        Rational r = round_coef(coef);
        if (!r.is_zero()) {
            out.terms_.emplace_back(idx, std::move(r));
        }
    }
    // The slack itself goes onto the grid, rounded up.
    return out.add_noise(Rational((slack / unit).ceil()) * unit, src);
}

std::string AffineForm::str() const
{
    std::string s = center_.str();
    for (const auto &[idx, coef] : terms_) {
        s += " + " + coef.str() + "*n" + std::to_string(idx);
    }
    return s;
}

AffineForm mul(const AffineForm &a, const AffineForm &b, NoiseSource &src)
{
    AffineForm linear = b.scale(a.center()) + a.scale(b.center()).shift(-a.center() * b.center());
    return linear.add_noise(a.radius() * b.radius(), src);
}

AffineForm mul(const AffineForm &a, const Interval &k, NoiseSource &src)
{
    const AffineForm scaled = a.scale(k.midpoint());
    return scaled.add_noise(k.radius() * (abs(a.center()) + a.radius()), src);
}

AffineForm inverse(const AffineForm &y, NoiseSource &src)
{
    const Interval r = y.to_interval();
    if (r.contains_zero()) {
        throw Error(ErrorKind::DivisionByZeroRange, "affine inverse over range " + r.str() + " containing zero");
    }
    if (r.hi().sign() < 0) {
        return -inverse(-y, src);
    }
    if (r.is_point()) {
        return AffineForm(Rational(1) / r.lo());
    }
    const Rational &a = r.lo();
    const Rational &b = r.hi();
    const Rational slope = -(Rational(1) / (b * b));
    // 1/y - slope*y is decreasing on [a, b].
    const Rational dmin = Rational(2) / b;
    const Rational dmax = Rational(1) / a + a / (b * b);
    const Rational zeta = (dmin + dmax) * Rational(1, 2);
    const Rational delta = (dmax - dmin) * Rational(1, 2);
    return y.scale(slope).shift(zeta).add_noise(delta, src);
}

AffineForm div(const AffineForm &a, const AffineForm &b, NoiseSource &src)
{
    return mul(a, inverse(b, src), src);
}

AffineForm sqrt(const AffineForm &y, NoiseSource &src, int precision_bits)
{
    const Interval r = y.to_interval();
    if (r.lo().sign() < 0) {
        throw Error(ErrorKind::NegativeSqrt, "affine sqrt over range " + r.str() + " with negative part");
    }
    if (r.is_point() || r.hi().is_zero()) {
        return AffineForm::from_interval(sqrt(r, precision_bits), src);
    }
    const Interval sa = rat_sqrt_outward(r.lo(), precision_bits);
    const Interval sb = rat_sqrt_outward(r.hi(), precision_bits);
    // sqrt(y) - slope*y is nondecreasing on [a, b] for slope <= 1/(2 sqrt(b)).
    const Rational slope = Rational(1) / (Rational(2) * sb.hi());
    const Rational dmin = sa.lo() - slope * r.lo();
    const Rational dmax = sb.hi() - slope * r.hi();
    const Rational zeta = (dmin + dmax) * Rational(1, 2);
    const Rational delta = (dmax - dmin) * Rational(1, 2);
    return y.scale(slope).shift(zeta).add_noise(delta, src);
}

} // namespace relbound
