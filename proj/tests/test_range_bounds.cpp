#include <doctest.h>

#include <relbound/corpus.hpp>
#include <relbound/errors.hpp>
#include <relbound/parser.hpp>
#include <relbound/range.hpp>
#include <relbound/smt.hpp>

#include "expr_gen.hpp"
#include "support.hpp"

#include <cstdlib>
#include <filesystem>

using namespace relbound;
using relbound::testing::random_expr;
using relbound::testing::random_in;

namespace
{

Expr P(const std::string &text, const std::vector<std::string> &vars = {"x", "y"})
{
    return parse_expression(text, vars);
}

Domain D(std::vector<Interval> vars)
{
    return Domain{std::move(vars), {}, {}};
}

RefinementConfig quick()
{
    RefinementConfig cfg;
    cfg.timeout = std::chrono::milliseconds(20000); // budget-bound, not time-bound
    return cfg;
}

bool solver_available()
{
    const std::string p = resolve_solver_path("");
    if (p.find('/') != std::string::npos) {
        return std::filesystem::exists(p);
    }
    const char *path = std::getenv("PATH");
    std::string dirs = path ? path : "";
    std::size_t start = 0;
    while (start <= dirs.size()) {
        const std::size_t end = dirs.find(':', start);
        const std::string dir = dirs.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!dir.empty() && std::filesystem::exists(dir + "/" + p)) {
            return true;
        }
        if (end == std::string::npos) {
            break;
        }
        start = end + 1;
    }
    return false;
}

} // namespace

TEST_CASE("interval ranges")
{
    CHECK(range_ia(P("x - x"), D({Interval(0, 1)})) == Interval(-1, 1));
    CHECK(range_ia(P("x * y"), D({Interval(1, 2), Interval(3, 4)})) == Interval(3, 8));
    try {
        range_ia(P("1 / (x - 3)"), D({Interval(2, 4)}));
        FAIL("expected DivisionByZeroRange");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::DivisionByZeroRange);
    }
}

TEST_CASE("affine ranges")
{
    CHECK(range_aa(P("x - x"), D({Interval(0, 1)})) == Interval(Rational(0)));
    CHECK(range_aa(P("(x + 1) - x"), D({Interval(0, 5)})) == Interval(Rational(1)));
    const Interval sq = range_aa(P("x * x"), D({Interval(-1, 1)}));
    CHECK(Interval(0, 1).subset_of(sq));
    CHECK(sq.subset_of(Interval(-2, 2)));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10000; ++i) {
        const Rational x = random_in(rng, Interval(-1, 1));
        REQUIRE(sq.contains(x * x));
    }
    CHECK_THROWS_AS(range_aa(P("1 / (x - 3)"), D({Interval(2, 4)})), Error);
}

TEST_CASE("refined ranges")
{
    const RefinementConfig cfg = quick();
    const RefinedRange r = range_refined(P("x - x * x"), D({Interval(0, 1)}), cfg);
    CHECK(r.ia == Interval(-1, 1));
    CHECK(r.range.hi() <= Rational(1, 4) * (Rational(1) + cfg.gap));
    CHECK(r.range.hi() >= Rational(1, 4));
    CHECK(r.range.lo() >= -cfg.gap);
    CHECK(r.range.lo() <= 0);
    CHECK(range_refined(P("7"), D({Interval(0, 1)}), cfg).range == Interval(Rational(7)));
    CHECK(range_refined(P("x"), D({Interval(1, 2)}), cfg).range == Interval(1, 2));
}

TEST_CASE("maximize_abs examples")
{
    const RefinementConfig cfg = quick();
    const BoundResult a = maximize_abs(P("x * x - x"), D({Interval(0, 1)}), cfg);
    CHECK(a.value >= Rational(1, 4));
    CHECK(a.value <= Rational(1, 4) * (Rational(1) + cfg.gap));
    REQUIRE(a.achieved_gap.has_value());
    CHECK(*a.achieved_gap <= cfg.gap);

    const BoundResult b = maximize_abs(P("x"), D({Interval(-2, 1)}), cfg);
    CHECK(b.value == 2);
    CHECK(b.bisections == 0);

    const BoundResult c = maximize_abs(P("x * y - 1"), D({Interval(0, 1), Interval(0, 1)}), cfg);
    CHECK(c.value >= 1);
    CHECK(c.value <= Rational(1) + cfg.gap);
}

TEST_CASE("maximize reports exhaustion with unknown gap")
{
    RefinementConfig cfg = quick();
    cfg.max_bisections = 3;
    const BoundResult r = maximize_abs(P("x * x - x"), D({Interval(0, 1)}), cfg);
    CHECK_FALSE(r.achieved_gap.has_value());
    CHECK(r.value >= Rational(1, 4));
    CHECK(r.bisections == 3);
}

TEST_CASE("objective with certified denominator")
{
    const RefinementConfig cfg = quick();
    // |x / x| with IA decorrelation would give 2 on [1, 2]; splitting recovers 1.
    Objective o;
    o.terms.emplace_back(P("x"), Rational(1));
    o.denominator = P("x");
    o.denominator_range = Interval(1, 2);
    const BoundResult r = maximize(o, D({Interval(1, 2)}), cfg);
    CHECK(r.value >= 1);
    CHECK(r.value <= Rational(101, 100));
}

TEST_CASE("soundness and dominance on random expressions")
{
    std::mt19937_64 rng(77);
    RefinementConfig cfg = quick();
    cfg.max_bisections = 200;
    int tested = 0;
    for (int i = 0; i < 120; ++i) {
        const Expr e = random_expr(rng, 3, 2, true, true);
        const Domain dom = D({Interval(Rational(1, 2), 2), Interval(Rational(-1), Rational(3, 2))});
        Interval ia, aa;
        RefinedRange rr{Interval(0), Interval(0)};
        BoundResult mx;
        try {
            ia = range_ia(e, dom);
            aa = range_aa(e, dom);
            rr = range_refined(e, dom, cfg);
            mx = maximize_abs(e, dom, cfg);
        } catch (const Error &) {
            continue; // undefined somewhere on the box
        }
        ++tested;
        REQUIRE(rr.range.subset_of(ia));
        for (int k = 0; k < (i < 20 ? 10000 : 300); ++k) {
            const std::vector<Rational> p = {random_in(rng, dom.vars[0]), random_in(rng, dom.vars[1])};
            ExactValue v;
            try {
                v = eval_rational(e, p);
            } catch (const Error &) {
                continue;
            }
            const Interval enc = v.enclosure();
            REQUIRE(enc.lo() <= ia.hi());
            REQUIRE(ia.lo() <= enc.hi());
            REQUIRE(enc.lo() <= aa.hi());
            REQUIRE(aa.lo() <= enc.hi());
            REQUIRE(enc.lo() <= rr.range.hi());
            REQUIRE(rr.range.lo() <= enc.hi());
            REQUIRE(abs(enc).lo() <= mx.value);
        }
    }
    CHECK(tested > 40);
}

TEST_CASE("doubling the budget never increases the bound")
{
    RefinementConfig cfg = quick();
    cfg.gap = Rational(1, 1000000);
    for (const auto &rec : bundled_corpus()) {
        const FunctionSpec f = parse_function(rec.source);
        const Domain dom = Domain::from_box(f.domain);
        for (int budget : {1, 2, 4, 8, 16, 32, 64}) {
            cfg.max_bisections = budget;
            const Rational small = maximize_abs(f.body, dom, cfg).value;
            cfg.max_bisections = budget * 2;
            const Rational big = maximize_abs(f.body, dom, cfg).value;
            REQUIRE(big <= small);
        }
    }
}

TEST_CASE("inclusion isotonicity")
{
    RefinementConfig cfg = quick();
    std::mt19937_64 rng(5);
    for (const auto &rec : bundled_corpus()) {
        const FunctionSpec f = parse_function(rec.source);
        const Domain whole = Domain::from_box(f.domain);
        const Interval ia_whole = range_ia(f.body, whole);
        const Rational mx_whole = maximize_abs(f.body, whole, cfg).value;
        for (int k = 0; k < 50; ++k) {
            Rational a = random_in(rng, f.domain[0]);
            Rational b = random_in(rng, f.domain[0]);
            if (b < a) {
                std::swap(a, b);
            }
            const Domain sub = D({Interval(a, b)});
            REQUIRE(range_ia(f.body, sub).subset_of(ia_whole));
            // A gap-terminated search only guarantees the sub-box bound up to
            // its own gap; callers needing strict <= cap with the enclosing bound.
            const BoundResult s = maximize_abs(f.body, sub, cfg);
            REQUIRE(s.achieved_gap.has_value());
            REQUIRE(s.value <= mx_whole * (Rational(1) + cfg.gap));
        }
    }
}

TEST_CASE("SMT-LIB script shape")
{
    Objective o = Objective::abs_expr(P("sqrt(x) - y"));
    o.denominator = P("x");
    const std::string s = smt_script(o, D({Interval(Rational(1, 2), 2), Interval(-1, 1)}), Rational(3, 4));
    CHECK(s.find("(set-logic QF_NRA)") != std::string::npos);
    CHECK(s.find("(declare-const x0 Real)") != std::string::npos);
    CHECK(s.find("(assert (<= (/ 1.0 2.0) x0))") != std::string::npos);
    CHECK(s.find("(assert (= (* s0 s0) x0))") != std::string::npos);
    CHECK(s.find("(assert (or (= a0 (- s0 x1)) (= a0 (- (- s0 x1)))))") != std::string::npos);
    CHECK(s.find("(check-sat)") != std::string::npos);
    CHECK(smt_literal(Rational(-3, 4)) == "(- (/ 3.0 4.0))");
    CHECK(smt_literal(Rational(5)) == "5.0");
}

TEST_CASE("missing solver degrades to interval ranges")
{
    RefinementConfig cfg = quick();
    cfg.backend = Backend::ExternalSmtProcess;
    cfg.solver_path = "/nonexistent/solver-binary";
    const RefinedRange r = range_refined(P("x - x * x"), D({Interval(0, 1)}), cfg);
    CHECK(r.degraded);
    CHECK(r.range == r.ia);
    const BoundResult b = maximize_abs(P("x * x - x"), D({Interval(0, 1)}), cfg);
    CHECK(b.degraded);
    CHECK(b.value >= Rational(1, 4));
}

TEST_CASE("external solver backend" * doctest::skip(!solver_available()))
{
    RefinementConfig cfg = quick();
    cfg.backend = Backend::ExternalSmtProcess;
    cfg.timeout = std::chrono::milliseconds(5000);
    auto dec = make_decider(cfg);
    const Objective o = Objective::signed_expr(P("x - x * x"));
    const Domain dom = D({Interval(0, 1)});
    CHECK(dec->exceeds(o, dom, Rational(1, 5)) == Decision::Sat);
    CHECK(dec->exceeds(o, dom, Rational(3, 10)) == Decision::Unsat);
    const RefinedRange r = range_refined(P("x - x * x"), dom, cfg);
    CHECK_FALSE(r.degraded);
    CHECK(r.range.subset_of(r.ia));
    CHECK(r.range.hi() >= Rational(1, 4));
    CHECK(r.range.hi() <= Rational(1, 4) * (Rational(1) + cfg.gap));
    const BoundResult b = maximize_abs(P("x * x - x"), dom, cfg);
    CHECK(b.value >= Rational(1, 4));
    CHECK(b.value <= Rational(1, 4) * (Rational(1) + cfg.gap));
    Objective ratio;
    ratio.terms.emplace_back(P("sqrt(x) - 1"), Rational(1));
    ratio.denominator = P("x");
    CHECK(dec->exceeds(ratio, D({Interval(1, 4)}), Rational(1, 5)) == Decision::Sat);   // max 1/4 at x = 4
    CHECK(dec->exceeds(ratio, D({Interval(1, 4)}), Rational(3, 10)) == Decision::Unsat);
}

TEST_CASE("config validation")
{
    RefinementConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.gap = Rational(0);
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.gap = Rational(1, 2);
    cfg.timeout = std::chrono::milliseconds(0);
    CHECK_THROWS_AS(cfg.validate(), Error);
}
