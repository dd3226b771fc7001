#include <relbound/errors.hpp>
#include <relbound/rational.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace relbound
{

const char *to_string(ErrorKind kind) noexcept
{
    switch (kind) {
        case ErrorKind::DivisionByZero:
            return "DivisionByZero";
        case ErrorKind::DivisionByZeroRange:
            return "DivisionByZeroRange";
        case ErrorKind::DivisionByZeroPoint:
            return "DivisionByZeroPoint";
        case ErrorKind::NegativeSqrt:
            return "NegativeSqrt";
        case ErrorKind::InvalidFloatOp:
            return "InvalidFloatOp";
        case ErrorKind::Overflow:
            return "Overflow";
        case ErrorKind::ZeroRangeFailure:
            return "ZeroRangeFailure";
        case ErrorKind::Parse:
            return "ParseError";
        case ErrorKind::Backend:
            return "BackendFailure";
        case ErrorKind::Usage:
            return "UsageError";
    }
    return "Unknown";
}

Rational::Rational(long long v)
{
    q_ = mpz_class(std::to_string(v));
}

Rational::Rational(long num, long den)
{
    if (den == 0) {
        throw Error(ErrorKind::DivisionByZero, "rational with zero denominator");
    }
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q))
{
    if (q_.get_den() == 0) {
        throw Error(ErrorKind::DivisionByZero, "rational with zero denominator");
    }
    q_.canonicalize();
}

Rational Rational::from_double(double d)
{
    if (!std::isfinite(d)) {
        throw Error(ErrorKind::InvalidFloatOp, "cannot convert non-finite double to rational");
    }
    Rational r;
    r.q_ = mpq_class(d); // exact
    return r;
}

Rational Rational::pow2(long e)
{
    Rational r;
    mpz_class p = 1;
    if (e >= 0) {
        mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
        r.q_ = mpq_class(p);
    } else {
        mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
        r.q_ = mpq_class(mpz_class(1), p);
    }
    return r;
}

Rational Rational::parse_decimal(std::string_view text)
{
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;
    long scale = 0;
    bool any = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        digits += text[i++];
        any = true;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            digits += text[i++];
            --scale;
            any = true;
        }
    }
    if (!any) {
        throw std::invalid_argument("malformed decimal literal: " + std::string(text));
    }
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
            eneg = text[i] == '-';
            ++i;
        }
        long ev = 0;
        bool edig = false;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            ev = ev * 10 + (text[i++] - '0');
            edig = true;
            if (ev > 100000) {
                throw std::invalid_argument("decimal exponent out of range: " + std::string(text));
            }
        }
        if (!edig) {
            throw std::invalid_argument("malformed decimal exponent: " + std::string(text));
        }
        scale += eneg ? -ev : ev;
    }
    if (i != text.size()) {
        throw std::invalid_argument("trailing characters in decimal literal: " + std::string(text));
    }
    mpz_class mant(digits);
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    Rational r;
    r.q_ = scale < 0 ? mpq_class(mant, ten_pow) : mpq_class(mant * ten_pow);
    r.q_.canonicalize();
    if (negative) {
        r.q_ = -r.q_;
    }
    return r;
}

Rational Rational::parse_fraction(std::string_view text)
{
    Rational r;
    if (r.q_.set_str(std::string(text), 10) != 0 || r.q_.get_den() == 0) {
        throw std::invalid_argument("malformed fraction: " + std::string(text));
    }
    r.q_.canonicalize();
    return r;
}

Rational Rational::operator-() const
{
    Rational r;
    r.q_ = -q_;
    return r;
}

Rational &Rational::operator+=(const Rational &o)
{
    q_ += o.q_;
    return *this;
}

Rational &Rational::operator-=(const Rational &o)
{
    q_ -= o.q_;
    return *this;
}

Rational &Rational::operator*=(const Rational &o)
{
    q_ *= o.q_;
    return *this;
}

Rational &Rational::operator/=(const Rational &o)
{
    if (o.is_zero()) {
        throw Error(ErrorKind::DivisionByZero, "rational division by zero");
    }
    q_ /= o.q_;
    return *this;
}

std::size_t Rational::numerator_bits() const
{
    return mpz_sizeinbase(q_.get_num_mpz_t(), 2);
}

std::size_t Rational::denominator_bits() const
{
    return mpz_sizeinbase(q_.get_den_mpz_t(), 2);
}

mpz_class Rational::floor() const
{
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
}

mpz_class Rational::ceil() const
{
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
}

long Rational::ilog2() const
{
    if (is_zero()) {
        throw std::domain_error("ilog2 of zero");
    }
    const mpz_class n = abs(q_.get_num());
    const mpz_class &d = q_.get_den();
    // Estimate from bit lengths, then correct by one.
    long e = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2));
    const Rational mag = relbound::abs(*this);
    if (mag < pow2(e)) {
        --e;
    }
    return e;
}

std::string Rational::str() const
{
    return q_.get_str();
}

std::string Rational::exact_decimal() const
{
    mpz_class d = q_.get_den();
    long twos = 0;
    long fives = 0;
    while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) {
        d /= 2;
        ++twos;
    }
    while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) {
        d /= 5;
        ++fives;
    }
    if (d != 1) {
        return {};
    }
    const long places = std::max(twos, fives);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
    mpz_class scaled = abs(q_.get_num()) * scale / q_.get_den();
    std::string digits = scaled.get_str();
    if (static_cast<long>(digits.size()) <= places) {
        digits.insert(0, static_cast<std::size_t>(places + 1 - static_cast<long>(digits.size())), '0');
    }
    std::string out = sign() < 0 ? "-" : "";
    const std::size_t int_len = digits.size() - static_cast<std::size_t>(places);
    out += digits.substr(0, int_len);
    out += '.';
    out += places == 0 ? std::string("0") : digits.substr(int_len);
    return out;
}

Rational abs(const Rational &a)
{
    return a.sign() < 0 ? -a : a;
}

const Rational &min(const Rational &a, const Rational &b)
{
    return b < a ? b : a;
}

const Rational &max(const Rational &a, const Rational &b)
{
    return a < b ? b : a;
}

std::string to_scientific(const Rational &x, int digits, bool upward)
{
    if (digits < 1) {
        digits = 1;
    }
    if (x.is_zero()) {
        return "0.0000e+00";
    }
    const Rational mag = abs(x);
    // Find k with 10^k <= mag < 10^(k+1).
    long k = static_cast<long>(std::floor(static_cast<double>(mag.ilog2()) * 0.30102999566398120));
    auto pow10 = [](long e) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
        return e < 0 ? Rational(mpq_class(mpz_class(1), p)) : Rational(p);
    };
    while (mag < pow10(k)) {
        --k;
    }
    while (!(mag < pow10(k + 1))) {
        ++k;
    }
    // mantissa integer in [10^(digits-1), 10^digits]
    const Rational scaled = mag * pow10(digits - 1 - k);
    mpz_class m = upward ? scaled.ceil() : scaled.floor();
    mpz_class limit;
    mpz_ui_pow_ui(limit.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    if (m >= limit) {
        m /= 10;
        ++k;
    }
    std::string md = m.get_str();
    std::string out = x.sign() < 0 ? "-" : "";
    out += md.substr(0, 1);
    if (digits > 1) {
        out += '.';
        out += md.substr(1);
    }
    char exp[32];
    std::snprintf(exp, sizeof exp, "e%c%02ld", k < 0 ? '-' : '+', k < 0 ? -k : k);
    out += exp;
    return out;
}

std::ostream &operator<<(std::ostream &os, const Rational &r)
{
    return os << r.str();
}

} // namespace relbound
