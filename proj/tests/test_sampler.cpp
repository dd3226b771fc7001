#include <doctest.h>

#include <relbound/corpus.hpp>
#include <relbound/dataflow.hpp>
#include <relbound/errors.hpp>
#include <relbound/parser.hpp>
#include <relbound/sampler.hpp>
#include <relbound/simd.hpp>
#include <relbound/subdivision.hpp>
#include <relbound/taylor.hpp>

#include "expr_gen.hpp"

#include <cmath>
#include <cstring>
#include <limits>

using namespace relbound;

namespace
{

const PrecisionSpec kF64 = PrecisionSpec::float64();
const PrecisionSpec kF32 = PrecisionSpec::float32();

std::vector<double> random_inputs(std::mt19937_64 &rng, int vars, std::size_t n, bool single)
{
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    std::uniform_int_distribution<int> special(0, 19);
    std::vector<double> in(static_cast<std::size_t>(vars) * n);
    for (auto &x : in) {
        switch (special(rng)) {
            case 0:
                x = 0.0;
                break;
            case 1:
                x = -0.0;
                break;
            case 2:
                x = 1e-310;
                break;
            default:
                x = u(rng);
        }
        if (single) {
            x = static_cast<double>(static_cast<float>(x));
        }
    }
    return in;
}

bool same_bits(double a, double b)
{
    std::uint64_t x;
    std::uint64_t y;
    std::memcpy(&x, &a, sizeof x);
    std::memcpy(&y, &b, sizeof y);
    return x == y || (std::isnan(a) && std::isnan(b));
}

} // namespace

TEST_CASE("tape agrees with the recursive float evaluator")
{
    std::mt19937_64 rng(1);
    for (int iter = 0; iter < 300; ++iter) {
        const PrecisionSpec &prec = iter % 2 ? kF32 : kF64;
        Expr e = relbound::testing::random_expr(rng, 4, 3, true);
        auto tape = simd::Tape::compile(e, prec);
        const std::size_t n = 16;
        auto in = random_inputs(rng, 3, n, tape.single());
        std::vector<double> out(n);
        std::vector<std::uint8_t> bad(n);
        simd::evaluate(tape, in.data(), n, out.data(), bad.data(), simd::Kernel::Scalar);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> x = {in[i], in[n + i], in[2 * n + i]};
            INFO(to_string(e));
            try {
                const double want = eval_float(e, x, prec);
                CHECK(bad[i] == 0);
                INFO(out[i], " vs ", want, " in ", x[0], ",", x[1], ",", x[2]);
                CHECK(same_bits(out[i], want));
            } catch (const Error &err) {
                CHECK(err.kind() == ErrorKind::InvalidFloatOp);
                CHECK(bad[i] == 1);
            }
        }
    }
}

TEST_CASE("vector kernels match the scalar reference bit for bit")
{
    std::mt19937_64 rng(2);
    for (simd::Kernel k : {simd::Kernel::Avx2, simd::Kernel::Neon}) {
        if (!simd::kernel_available(k)) {
            MESSAGE("kernel not available here: " << simd::to_string(k));
            continue;
        }
        for (int iter = 0; iter < 400; ++iter) {
            const PrecisionSpec &prec = iter % 2 ? kF32 : kF64;
            Expr e = relbound::testing::random_expr(rng, 5, 3, true);
            auto tape = simd::Tape::compile(e, prec);
            const std::size_t n = 1 + static_cast<std::size_t>(iter % 37);
            auto in = random_inputs(rng, 3, n, tape.single());
            std::vector<double> ref(n);
            std::vector<double> vec(n);
            std::vector<std::uint8_t> ref_bad(n);
            std::vector<std::uint8_t> vec_bad(n);
            simd::evaluate(tape, in.data(), n, ref.data(), ref_bad.data(), simd::Kernel::Scalar);
            simd::evaluate(tape, in.data(), n, vec.data(), vec_bad.data(), k);
            for (std::size_t i = 0; i < n; ++i) {
                INFO(to_string(e), " lane ", i);
                CHECK(ref_bad[i] == vec_bad[i]);
                CHECK(same_bits(ref[i], vec[i]));
            }
        }
    }
    CHECK(simd::kernel_available(simd::active_kernel()));
}

TEST_CASE("tape rejects noise and unsupported formats")
{
    CHECK_THROWS_AS(simd::Tape::compile(ex::eps(0), kF64), Error);
    PrecisionSpec half{"half", 11, -14, 15};
    CHECK_THROWS_AS(simd::Tape::compile(ex::var(0, "x"), half), Error);
}

TEST_CASE("sampler examples")
{
    auto c = underapprox(parse_function("def f(x: Real): Real = { require(0.0 <= x && x <= 1.0) 0.5 }"), kF64);
    CHECK(c.max_abs.is_zero());
    REQUIRE(c.max_rel);
    CHECK(c.max_rel->is_zero());
    CHECK(c.samples == 100002);

    auto x = underapprox(parse_function("def f(x: Real): Real = { require(1.0 <= x && x <= 2.0) x }"), kF64);
    REQUIRE(x.max_rel);
    CHECK(*x.max_rel > 0);
    CHECK(*x.max_rel <= kF64.epsilon());
    CHECK(x.max_abs <= 2 * kF64.epsilon());
}

TEST_CASE("sampler is deterministic and skips invalid points")
{
    const FunctionSpec b1 = corpus_spec("bspline1");
    SamplerOptions o;
    o.n = 5000;
    o.seed = 99;
    auto a = underapprox(b1, kF64, o);
    o.jobs = 3;
    auto b = underapprox(b1, kF64, o);
    CHECK(a.max_abs == b.max_abs);
    CHECK(a.max_rel == b.max_rel);
    CHECK(a.skipped == b.skipped);
    o.seed = 100;
    auto c = underapprox(b1, kF64, o);
    CHECK(a.argmax_abs != c.argmax_abs);

    o.n = 100;
    // x = 0 is a corner of [0, 1], where 1/x is infinite.
    const FunctionSpec z = parse_function("def h(x: Real): Real = { require(0.0 <= x && x <= 1.0) 1.0 / x }");
    auto e = underapprox(z, kF64, o);
    CHECK(e.samples == 102);
    CHECK(e.skipped >= 1);
}

TEST_CASE("partitioned sampling restricts maxima to each box")
{
    const FunctionSpec b3 = corpus_spec("bspline3");
    auto plan = plan_subdivision(b3.domain, 8, 50);
    SamplerOptions o;
    o.n = 20000;
    auto whole = underapprox(b3, kF64, o);
    auto parts = underapprox_partitioned(b3, kF64, plan.boxes, o);
    REQUIRE(parts.size() == 8);
    long samples = 0;
    Rational best;
    for (const auto &p : parts) {
        samples += p.samples;
        CHECK(p.max_abs <= whole.max_abs);
        best = max(best, p.max_abs);
    }
    CHECK(best == whole.max_abs);
    CHECK(samples >= whole.samples);
}

TEST_CASE("sampled maxima stay below the bounds")
{
    SamplerOptions o;
    o.n = 20000;
    for (const auto &bench : bundled_corpus()) {
        const FunctionSpec s = corpus_spec(bench.name);
        auto seen = underapprox(s, kF64, o);
        INFO(bench.name);
        CHECK(seen.max_abs > 0);
        CHECK(seen.max_abs <= forward_abs_error(s, kF64, RangeMethod::IntervalOnly, {}).bound);
        CHECK(seen.max_abs <= taylor_abs(s, kF64, {}).bound);

        auto plan = plan_subdivision(s.domain, 8, 50);
        auto rep = analyze_subdivided(s, kF64, SubdivisionMethod::Direct, plan, {});
        auto parts = underapprox_partitioned(s, kF64, plan.boxes, o);
        for (std::size_t i = 0; i < plan.boxes.size(); ++i) {
            const auto &piece = rep.per_subdomain[i];
            if (piece.rel && parts[i].max_rel) {
                CHECK(*parts[i].max_rel <= *piece.rel);
            }
            if (piece.abs) {
                CHECK(parts[i].max_abs <= *piece.abs);
            }
        }
    }
}
