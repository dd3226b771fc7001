#include <relbound/derive.hpp>
#include <relbound/errors.hpp>
#include <relbound/taylor.hpp>

#include <chrono>

namespace relbound
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Expr at_zero_noise(const Expr &e)
{
    return simplify(substitute_zero_noise(e, NoiseSelect::Both));
}

struct NoiseSym {
    Symbol sym;
    Rational bound;
};

std::vector<NoiseSym> noise_symbols(const AbstractedExpr &a)
{
    std::vector<NoiseSym> out;
    for (int i = 0; i < a.eps_count(); ++i) {
        out.push_back({{SymbolKind::Eps, i}, a.eps_bounds[static_cast<std::size_t>(i)]});
    }
    for (int i = 0; i < a.delta_count(); ++i) {
        out.push_back({{SymbolKind::Delta, i}, a.delta_bounds[static_cast<std::size_t>(i)]});
    }
    return out;
}

} // namespace

Objective TaylorObjective::objective(const std::optional<Interval> &certificate) const
{
    Objective obj;
    obj.kind = Objective::Kind::AbsSum;
    for (const auto &t : first_order) {
        obj.terms.emplace_back(t.numerator, t.bound);
    }
    if (kind == Kind::RelativeDirect) {
        obj.denominator = denominator;
        obj.denominator_range = certificate;
    }
    return obj;
}

TaylorObjective taylor_objective(const AbstractedExpr &a, TaylorObjective::Kind kind)
{
    TaylorObjective t;
    t.kind = kind;
    if (kind == TaylorObjective::Kind::RelativeDirect) {
        t.denominator = a.original;
    }
    for (int i = 0; i < a.eps_count(); ++i) {
        Expr d = at_zero_noise(derive(a.tree, {SymbolKind::Eps, i}));
        if (is_const(d, Rational(0))) {
            continue;
        }
        Expr partial = kind == TaylorObjective::Kind::Absolute ? d : simplify(ex::neg(ex::div(d, a.original)));
        t.first_order.push_back({i, partial, d, a.eps_bounds[static_cast<std::size_t>(i)]});
    }
    return t;
}

Rational remainder_bound(const AbstractedExpr &a, const Domain &dom, const std::optional<Interval> &f_range)
{
    const std::vector<NoiseSym> ys = noise_symbols(a);
    const Rational half(1, 2);
    Rational second;
    Rational first_delta;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const Expr di = derive(a.tree, ys[i].sym);
        if (is_const(di, Rational(0))) {
            continue;
        }
        if (ys[i].sym.kind == SymbolKind::Delta) {
            const Expr at0 = at_zero_noise(di);
            first_delta += eval_interval(at0, dom).magnitude() * ys[i].bound;
        }
        for (std::size_t j = i; j < ys.size(); ++j) {
            if (!contains_symbol(di, ys[j].sym)) {
                continue;
            }
            const Expr h = derive(di, ys[j].sym);
            if (is_const(h, Rational(0))) {
                continue;
            }
            const Rational mag = eval_interval(h, dom).magnitude();
            second += (i == j ? half : Rational(1)) * mag * ys[i].bound * ys[j].bound;
        }
    }
    Rational total = second + first_delta;
    if (f_range) {
        if (f_range->contains_zero()) {
            throw Error(ErrorKind::ZeroRangeFailure, "remainder divisor range contains zero");
        }
        total /= f_range->min_magnitude();
    }
    return total;
}

Interval certify_zero_free(const Expr &f, const Domain &dom, const RefinementConfig &cfg, int *queries)
{
    RefinedRange rr;
    try {
        rr = range_refined(f, dom, cfg);
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::DivisionByZeroRange || e.kind() == ErrorKind::NegativeSqrt) {
            throw Error(ErrorKind::ZeroRangeFailure, std::string("range of f could not be bounded: ") + e.what());
        }
        throw;
    }
    if (queries) {
        *queries += rr.queries;
    }
    if (rr.range.contains_zero()) {
        throw Error(ErrorKind::ZeroRangeFailure, "range of f may contain zero: " + rr.range.str());
    }
    return rr.range;
}

AbsErrorResult taylor_abs(const FunctionSpec &spec, const PrecisionSpec &prec, const RefinementConfig &cfg,
                          const AbstractionOptions &opts)
{
    const auto t0 = Clock::now();
    const AbstractedExpr a = abstract_fp(spec.body, prec, opts);
    const Domain box = Domain::from_box(spec.domain);
    const TaylorObjective t = taylor_objective(a, TaylorObjective::Kind::Absolute);

    AbsErrorResult out;
    out.engine = "taylor";
    out.method = RangeMethod::IntervalWithRefinement;
    Rational first;
    if (!t.first_order.empty()) {
        const BoundResult br = maximize(t.objective(), box, cfg);
        first = br.value;
        out.queries = br.query_count;
    }
    out.remainder = remainder_bound(a, a.domain(spec.domain.intervals()));
    out.bound = first + out.remainder;
    out.result_range = range_ia(spec.body, box);
    out.wall_seconds = seconds_since(t0);
    return out;
}

RelErrorResult taylor_rel_direct(const FunctionSpec &spec, const PrecisionSpec &prec, const RefinementConfig &cfg,
                                 const AbstractionOptions &opts)
{
    const auto t0 = Clock::now();
    const Domain box = Domain::from_box(spec.domain);
    RelErrorResult out;
    out.kind = RelMethod::Direct;
    const Interval cert = certify_zero_free(spec.body, box, cfg, &out.queries);
    const AbstractedExpr a = abstract_fp(spec.body, prec, opts);
    const TaylorObjective t = taylor_objective(a, TaylorObjective::Kind::RelativeDirect);

    if (!t.first_order.empty()) {
        const BoundResult br = maximize(t.objective(cert), box, cfg);
        out.first_order = br.value;
        out.achieved_gap = br.achieved_gap;
        out.queries += br.query_count;
    }
    out.remainder = remainder_bound(a, a.domain(spec.domain.intervals()), cert);
    out.bound = out.first_order + out.remainder;
    out.result_range = cert;
    out.wall_seconds = seconds_since(t0);
    return out;
}

RelErrorResult taylor_rel_via_abs(const FunctionSpec &spec, const PrecisionSpec &prec, const RefinementConfig &cfg,
                                  const AbstractionOptions &opts)
{
    const auto t0 = Clock::now();
    RelErrorResult out;
    out.kind = RelMethod::ViaAbsolute;
    const Interval cert = certify_zero_free(spec.body, Domain::from_box(spec.domain), cfg, &out.queries);
    const AbsErrorResult abs = taylor_abs(spec, prec, cfg, opts);
    const Rational m = cert.min_magnitude();
    out.bound = abs.bound / m;
    out.remainder = abs.remainder / m;
    out.first_order = out.bound - out.remainder;
    out.result_range = cert;
    out.queries += abs.queries;
    out.wall_seconds = seconds_since(t0);
    return out;
}

RelErrorResult naive_rel(const FunctionSpec &spec, const PrecisionSpec &prec, const RefinementConfig &cfg,
                         const AbstractionOptions &opts)
{
    const auto t0 = Clock::now();
    RelErrorResult out;
    out.kind = RelMethod::Naive;
    const Interval cert = certify_zero_free(spec.body, Domain::from_box(spec.domain), cfg, &out.queries);
    const AbstractedExpr a = abstract_fp(spec.body, prec, opts);

    Objective obj = Objective::abs_expr(ex::sub(spec.body, a.tree));
    obj.denominator = spec.body;
    obj.denominator_range = cert;
    const BoundResult br = maximize(obj, a.domain(spec.domain.intervals()), cfg);
    out.bound = br.value;
    out.first_order = br.value;
    out.achieved_gap = br.achieved_gap;
    out.queries += br.query_count;
    out.result_range = cert;
    out.wall_seconds = seconds_since(t0);
    return out;
}

} // namespace relbound
