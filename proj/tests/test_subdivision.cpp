#include <doctest.h>

#include <relbound/corpus.hpp>
#include <relbound/parser.hpp>
#include <relbound/subdivision.hpp>
#include <relbound/taylor.hpp>

#include <algorithm>
#include <chrono>

using namespace relbound;

namespace
{

const PrecisionSpec kF64 = PrecisionSpec::float64();

Box cube(int n, std::vector<Rational> widths = {})
{
    std::vector<std::pair<std::string, Interval>> e;
    for (int i = 0; i < n; ++i) {
        const Rational w = i < static_cast<int>(widths.size()) ? widths[static_cast<std::size_t>(i)] : Rational(1);
        e.emplace_back("v" + std::to_string(i), Interval(Rational(0), w));
    }
    return Box(e);
}

} // namespace

TEST_CASE("plan counts")
{
    CHECK(plan_subdivision(cube(3), 4, 50).boxes.size() == 16);
    CHECK(plan_subdivision(cube(3), 6, 50).boxes.size() == 36);
    CHECK(plan_subdivision(cube(3), 8, 50).boxes.size() == 8);
    CHECK(plan_subdivision(cube(3), 4, 100).boxes.size() == 64);
    CHECK(plan_subdivision(cube(6), 4, 100).boxes.size() == 64);
    CHECK(plan_subdivision(cube(1), 8, 50).boxes.size() == 8);  // capped at n
    CHECK(plan_subdivision(cube(1), 2, 50).boxes.size() == 2);
    CHECK(plan_subdivision(cube(3), 1, 50).boxes.size() == 1);
    CHECK(plan_subdivision(cube(3), 8, 10).boxes.size() == 1); // 7 < m

    auto starved = plan_subdivision(cube(3), 2, 3);
    CHECK(starved.boxes.size() == 1);
    CHECK(!starved.warning.empty());
    CHECK_THROWS_AS(plan_subdivision(cube(2), 0, 50), Error);
}

TEST_CASE("plan picks the widest variables, ties by declaration order")
{
    auto p = plan_subdivision(cube(4, {Rational(1), Rational(3), Rational(1), Rational(3)}), 4, 30);
    REQUIRE(p.chosen.size() == 2);
    CHECK(p.chosen[0] == 1);
    CHECK(p.chosen[1] == 3);
    auto t = plan_subdivision(cube(3), 4, 20);
    REQUIRE(t.chosen.size() == 2);
    CHECK(t.chosen[0] == 0);
    CHECK(t.chosen[1] == 1);
}

TEST_CASE("plan pieces partition each chosen interval")
{
    const Box b({{"a", Interval(Rational(-1), Rational(2))}, {"b", Interval(Rational(1, 3), Rational(1, 2))}});
    auto p = plan_subdivision(b, 3, 100);
    REQUIRE(p.chosen.size() == 2);
    REQUIRE(p.boxes.size() == 9);
    for (std::size_t var = 0; var < 2; ++var) {
        std::vector<Interval> pieces;
        for (const auto &sub : p.boxes) {
            if (std::find(pieces.begin(), pieces.end(), sub[var]) == pieces.end()) {
                pieces.push_back(sub[var]);
            }
            CHECK(sub[var].subset_of(b[var]));
        }
        std::sort(pieces.begin(), pieces.end(), [](const Interval &x, const Interval &y) { return x.lo() < y.lo(); });
        REQUIRE(pieces.size() == 3);
        CHECK(pieces.front().lo() == b[var].lo());
        CHECK(pieces.back().hi() == b[var].hi());
        for (std::size_t j = 0; j + 1 < pieces.size(); ++j) {
            CHECK(pieces[j].hi() == pieces[j + 1].lo());
            CHECK(pieces[j].width() == pieces[j + 1].width());
        }
    }
    // lexicographic: the first variable varies slowest
    CHECK(p.boxes[0][0] == p.boxes[1][0]);
    CHECK(p.boxes[0][1] != p.boxes[1][1]);
}

TEST_CASE("bspline3 with the division-by-zero fallback")
{
    const FunctionSpec b3 = corpus_spec("bspline3");
    auto plan = plan_subdivision(b3.domain, 8, 50);
    const auto t0 = std::chrono::steady_clock::now();
    auto rep = analyze_subdivided(b3, kF64, SubdivisionMethod::Direct, plan, {});
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 60);
    CHECK(rep.total == 8);
    REQUIRE(rep.failure_count() == 1);
    CHECK(rep.failed[0].first[0] == Interval(Rational(0), Rational(1, 8)));
    CHECK(rep.failed[0].second <= Rational(2) * Rational::parse_decimal("9.67e-19"));
    REQUIRE(rep.rel_bound);
    CHECK(*rep.rel_bound >= Rational::parse_decimal("3.3e-16"));
    CHECK(*rep.rel_bound <= Rational::parse_decimal("1.4e-15"));
    CHECK(!rep.suppressed);
    CHECK(rep.errors.empty());

    auto fwd = analyze_subdivided(b3, kF64, SubdivisionMethod::ViaAbsForward, plan, {});
    CHECK(fwd.failure_count() == 1);
    REQUIRE(fwd.rel_bound);
    CHECK(*rep.rel_bound <= *fwd.rel_bound);
}

TEST_CASE("zero-free domain: no failures and never above the whole-domain bound")
{
    for (const char *name : {"bspline1", "bspline2"}) {
        const FunctionSpec s = corpus_spec(name);
        auto plan = plan_subdivision(s.domain, 2, 50);
        for (auto method : {SubdivisionMethod::Direct, SubdivisionMethod::ViaAbsForward}) {
            auto rep = analyze_subdivided(s, kF64, method, plan, {});
            INFO(name, " ", to_string(method));
            CHECK(rep.failure_count() == 0);
            REQUIRE(rep.rel_bound);
            REQUIRE(rep.whole_bound);
            CHECK(*rep.rel_bound <= *rep.whole_bound);
        }
    }
}

TEST_CASE("identically zero function fails everywhere and is suppressed")
{
    const FunctionSpec z = parse_function("def z(x: Real): Real = { require(1.0 <= x && x <= 2.0) x - x }");
    auto rep = analyze_subdivided(z, kF64, SubdivisionMethod::Direct, plan_subdivision(z.domain, 8, 50), {});
    CHECK(rep.total == 8);
    CHECK(rep.failure_count() == 8);
    CHECK(rep.suppressed);
    CHECK(!rep.rel_bound);
}

TEST_CASE("parallel runs give the same report")
{
    const FunctionSpec b3 = corpus_spec("bspline3");
    auto plan = plan_subdivision(b3.domain, 8, 50);
    SubdivisionOptions par;
    par.jobs = 4;
    auto a = analyze_subdivided(b3, kF64, SubdivisionMethod::Direct, plan, {});
    auto b = analyze_subdivided(b3, kF64, SubdivisionMethod::Direct, plan, {}, par);
    REQUIRE(a.per_subdomain.size() == b.per_subdomain.size());
    for (std::size_t i = 0; i < a.per_subdomain.size(); ++i) {
        CHECK(a.per_subdomain[i].box == b.per_subdomain[i].box);
        CHECK(a.per_subdomain[i].rel == b.per_subdomain[i].rel);
        CHECK(a.per_subdomain[i].abs == b.per_subdomain[i].abs);
    }
    CHECK(a.rel_bound == b.rel_bound);
}
