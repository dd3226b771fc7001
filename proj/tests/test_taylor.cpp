#include <doctest.h>

#include <relbound/corpus.hpp>
#include <relbound/dataflow.hpp>
#include <relbound/errors.hpp>
#include <relbound/parser.hpp>
#include <relbound/taylor.hpp>

#include <functional>

#include "expr_gen.hpp"
#include "oracle.hpp"

using namespace relbound;
using relbound::testing::observe;
using relbound::testing::random_point;

namespace
{

const PrecisionSpec kF64 = PrecisionSpec::float64();
const Rational kEps = kF64.epsilon();

FunctionSpec F(const std::string &text)
{
    return parse_function(text);
}

FunctionSpec on(FunctionSpec s, Rational lo, Rational hi)
{
    s.domain = s.domain.with(0, Interval(std::move(lo), std::move(hi)));
    return s;
}

const FunctionSpec kX = F("def f(x: Real): Real = { require(1.0 <= x && x <= 2.0) x }");

ErrorKind kind_of(const std::function<void()> &fn)
{
    try {
        fn();
    } catch (const Error &e) {
        return e.kind();
    }
    return ErrorKind::Usage;
}

} // namespace

TEST_CASE("taylor absolute examples")
{
    AbstractionOptions exact_inputs;
    exact_inputs.round_inputs = false;
    auto sum = taylor_abs(F("def f(x: Real, y: Real): Real = { require(1.0 <= x && x <= 2.0 && 1.0 <= y && y <= 2.0) "
                            "x + y }"),
                          kF64, {}, exact_inputs);
    CHECK(sum.bound == 4 * kEps);
    CHECK(sum.remainder.is_zero());

    auto half = taylor_abs(F("def f(x: Real): Real = { require(0.0 <= x && x <= 1.0) 0.5 }"), kF64, {});
    CHECK(half.bound.is_zero());

    // x*x on [1,2]: first-order terms 2x^2 (input) and x^2 (product), at most 12 eps.
    const FunctionSpec sq = F("def f(x: Real): Real = { require(1.0 <= x && x <= 2.0) x * x }");
    auto r = taylor_abs(sq, kF64, {});
    std::mt19937_64 rng(3);
    Rational seen;
    for (int k = 0; k < 2000; ++k) {
        seen = max(seen, observe(sq.body, kF64, random_point(rng, sq.domain))->abs);
    }
    CHECK(seen > 0);
    CHECK(r.bound >= seen);
    CHECK(r.bound <= 3 * 12 * kEps);
}

TEST_CASE("remainder examples")
{
    AbstractionOptions exact_inputs;
    exact_inputs.round_inputs = false;
    const FunctionSpec sum = F("def f(x: Real, y: Real): Real = { require(1.0 <= x && x <= 2.0 && 1.0 <= y && y <= "
                               "2.0) x + y }");
    AbstractedExpr a = abstract_fp(sum.body, kF64, exact_inputs);
    CHECK(remainder_bound(a, a.domain(sum.domain.intervals())).is_zero());

    const FunctionSpec prod = F("def f(x: Real, y: Real): Real = { require(1.0 <= x && x <= 2.0 && 1.0 <= y && y <= "
                                "2.0) x * y }");
    AbstractedExpr p = abstract_fp(prod.body, kF64);
    const Rational mr = remainder_bound(p, p.domain(prod.domain.intervals()));
    CHECK(mr > 0);
    CHECK(mr <= Rational::pow2(-93)); // ~1.0e-28

    // e-part scales with the square of the eps bound.
    AbstractedExpr e1 = p;
    for (auto &b : e1.delta_bounds) {
        b = Rational(0);
    }
    AbstractedExpr e2 = e1;
    for (auto &b : e2.eps_bounds) {
        b *= 2;
    }
    const Rational r1 = remainder_bound(e1, e1.domain(prod.domain.intervals()));
    const Rational r2 = remainder_bound(e2, e2.domain(prod.domain.intervals()));
    CHECK(r2 / r1 >= 4);
    CHECK(r2 / r1 <= 4 * (1 + Rational::pow2(-40)));
}

TEST_CASE("direct relative bound of a bare input")
{
    auto d = taylor_rel_direct(kX, kF64, {});
    CHECK(d.kind == RelMethod::Direct);
    CHECK(d.bound >= kEps);
    CHECK(d.bound <= kEps * Rational(6, 5));
    CHECK(d.remainder == kF64.delta()); // d f~/d d0 = 1 over |x| >= 1
    auto via = rel_via_abs(kX, kF64, RangeMethod::IntervalOnly, {});
    CHECK(via.bound >= kEps * Rational(19, 10));
    auto naive = naive_rel(kX, kF64, {});
    CHECK(naive.bound >= kEps);
}

TEST_CASE("direct relative bound on bspline3")
{
    const FunctionSpec b3 = corpus_spec("bspline3");
    CHECK(kind_of([&] { taylor_rel_direct(b3, kF64, {}); }) == ErrorKind::ZeroRangeFailure);
    CHECK(kind_of([&] { naive_rel(b3, kF64, {}); }) == ErrorKind::ZeroRangeFailure);

    const FunctionSpec tail = on(b3, Rational(1, 8), Rational(1));
    auto d = taylor_rel_direct(tail, kF64, {});
    CHECK(d.bound <= 2 * Rational::parse_decimal("6.66e-16"));
    CHECK(d.bound >= 6 * kEps); // 3 (cube of the rounded input) + 3 rounded operations
    auto via = rel_via_abs(tail, kF64, RangeMethod::IntervalWithRefinement, {});
    CHECK(d.bound * 10 <= via.bound);
    auto naive = naive_rel(tail, kF64, {});
    CHECK(naive.bound >= 100 * d.bound);
}

TEST_CASE("relative terms mention only real variables")
{
    for (const auto &b : bundled_corpus()) {
        const FunctionSpec s = corpus_spec(b.name);
        const AbstractedExpr a = abstract_fp(s.body, kF64);
        for (auto kind : {TaylorObjective::Kind::Absolute, TaylorObjective::Kind::RelativeDirect}) {
            const TaylorObjective t = taylor_objective(a, kind);
            CHECK(!t.first_order.empty());
            for (const auto &term : t.first_order) {
                CHECK(!contains_noise(term.partial));
                CHECK(!contains_noise(term.numerator));
            }
        }
    }
}

TEST_CASE("the relative error expression vanishes at zero noise")
{
    std::mt19937_64 rng(11);
    for (const auto &b : bundled_corpus()) {
        const FunctionSpec s = corpus_spec(b.name);
        const AbstractedExpr a = abstract_fp(s.body, kF64);
        const Expr g = ex::div(ex::sub(s.body, a.tree), s.body);
        int evaluated = 0;
        for (int k = 0; k < 100; ++k) {
            try {
                CHECK(eval_rational(g, random_point(rng, s.domain)).value.is_zero());
                ++evaluated;
            } catch (const Error &e) {
                CHECK(e.kind() == ErrorKind::DivisionByZeroPoint);
            }
        }
        CHECK(evaluated > 90);
    }
}

TEST_CASE("taylor bounds are sound against observed errors")
{
    const std::vector<std::pair<std::string, std::pair<Rational, Rational>>> domains = {
        {"bspline0", {Rational(0), Rational(7, 8)}},
        {"bspline1", {Rational(0), Rational(1)}},
        {"bspline2", {Rational(0), Rational(1)}},
        {"bspline3", {Rational(1, 8), Rational(1)}},
    };
    for (const auto &[name, dom] : domains) {
        const FunctionSpec s = on(corpus_spec(name), dom.first, dom.second);
        auto abs = taylor_abs(s, kF64, {});
        auto direct = taylor_rel_direct(s, kF64, {});
        auto via = taylor_rel_via_abs(s, kF64, {});
        auto naive = naive_rel(s, kF64, {});
        INFO(name);
        CHECK(direct.bound <= naive.bound);
        CHECK(direct.remainder <= direct.first_order / 1000);
        std::mt19937_64 rng(5);
        for (int k = 0; k < 3000; ++k) {
            auto o = observe(s.body, kF64, random_point(rng, s.domain));
            REQUIRE(o);
            CHECK(o->abs <= abs.bound);
            REQUIRE(o->rel);
            CHECK(*o->rel <= direct.bound);
            CHECK(*o->rel <= via.bound);
            CHECK(*o->rel <= naive.bound);
        }
    }
}

TEST_CASE("taylor absolute bound is sound on random expressions")
{
    std::mt19937_64 rng(17);
    int checked = 0;
    for (int iter = 0; iter < 60; ++iter) {
        FunctionSpec spec;
        spec.name = "r";
        spec.params = {"x", "y"};
        spec.domain = Box({{"x", Interval(Rational(1, 2), Rational(3))}, {"y", Interval(Rational(-2), Rational(5, 4))}});
        spec.body = relbound::testing::random_expr(rng, 3, 2, iter % 2 == 0);
        AbsErrorResult r;
        RefinementConfig cfg;
        cfg.max_bisections = 200;
        try {
            r = taylor_abs(spec, kF64, cfg);
        } catch (const Error &) {
            continue;
        }
        for (int k = 0; k < 30; ++k) {
            auto o = observe(spec.body, kF64, random_point(rng, spec.domain));
            if (o) {
                INFO(to_string(spec.body));
                CHECK(o->abs <= r.bound);
                ++checked;
            }
        }
    }
    CHECK(checked > 500);
}
