#include <relbound/errors.hpp>
#include <relbound/eval.hpp>
#include <relbound/sampler.hpp>
#include <relbound/simd.hpp>

#include <algorithm>
#include <random>
#include <thread>

namespace relbound
{

namespace
{

constexpr int kGridBits = 62;
constexpr std::size_t kBatch = 4096;

const Rational &rel_floor()
{
    static const Rational f = Rational::pow2(-512);
    return f;
}

std::vector<std::vector<Rational>> draw_points(const Box &box, const SamplerOptions &opts)
{
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::uint64_t> k(0, std::uint64_t(1) << kGridBits);
    const Rational unit = Rational::pow2(-kGridBits);
    std::vector<std::vector<Rational>> pts;
    pts.reserve(static_cast<std::size_t>(opts.n));
    for (long s = 0; s < opts.n; ++s) {
        std::vector<Rational> p;
        for (std::size_t v = 0; v < box.size(); ++v) {
            const std::uint64_t draw = k(rng);
            const Rational frac = Rational(static_cast<long long>(draw)) * unit;
            p.push_back(box[v].lo() + box[v].width() * frac);
        }
        pts.push_back(std::move(p));
    }
    if (opts.corners && box.size() <= 16) {
        for (std::uint32_t mask = 0; mask < (1u << box.size()); ++mask) {
            std::vector<Rational> p;
            for (std::size_t v = 0; v < box.size(); ++v) {
                p.push_back((mask >> v) & 1 ? box[v].hi() : box[v].lo());
            }
            pts.push_back(std::move(p));
        }
    }
    return pts;
}

struct PointError {
    bool valid = false;
    Rational abs;
    std::optional<Rational> rel;
};

PointError exact_error(const Expr &body, const std::vector<Rational> &x, double got)
{
    PointError pe;
    ExactValue exact;
    try {
        exact = eval_rational(body, x);
    } catch (const Error &) {
        return pe;
    }
    pe.valid = true;
    pe.abs = max(Rational(0), abs(Rational::from_double(got) - exact.value) - exact.radius);
    if (abs(exact.value) - exact.radius > rel_floor()) {
        pe.rel = pe.abs / (abs(exact.value) + exact.radius);
    }
    return pe;
}

void merge(SampleReport &into, const PointError &pe, const std::vector<Rational> &x)
{
    if (!pe.valid) {
        ++into.skipped;
        return;
    }
    if (into.argmax_abs.empty() || pe.abs > into.max_abs) {
        into.max_abs = pe.abs;
        into.argmax_abs = x;
    }
    if (!pe.rel) {
        ++into.skipped;
        return;
    }
    if (!into.max_rel || *pe.rel > *into.max_rel) {
        into.max_rel = pe.rel;
        into.argmax_rel = x;
    }
}

void merge(SampleReport &into, const SampleReport &part)
{
    into.skipped += part.skipped;
    if (!part.argmax_abs.empty() && (into.argmax_abs.empty() || part.max_abs > into.max_abs)) {
        into.max_abs = part.max_abs;
        into.argmax_abs = part.argmax_abs;
    }
    if (part.max_rel && (!into.max_rel || *part.max_rel > *into.max_rel)) {
        into.max_rel = part.max_rel;
        into.argmax_rel = part.argmax_rel;
    }
}

bool inside(const Box &b, const std::vector<Rational> &x)
{
    for (std::size_t v = 0; v < b.size(); ++v) {
        if (!b[v].contains(x[v])) {
            return false;
        }
    }
    return true;
}

std::vector<SampleReport> run(const FunctionSpec &spec, const PrecisionSpec &prec, const std::vector<Box> &boxes,
                              const SamplerOptions &opts)
{
    if (opts.n < 1) {
        throw Error(ErrorKind::Usage, "sample count must be positive");
    }
    const simd::Tape tape = simd::Tape::compile(spec.body, prec);
    const std::vector<std::vector<Rational>> pts = draw_points(spec.domain, opts);
    const std::size_t nv = spec.domain.size();
    const std::size_t total = pts.size();

    // Float results, batched through the vector kernel.
    std::vector<double> got(total);
    std::vector<std::uint8_t> bad(total);
    std::vector<double> inputs;
    for (std::size_t start = 0; start < total; start += kBatch) {
        const std::size_t len = std::min(kBatch, total - start);
        inputs.assign(std::max<std::size_t>(nv, 1) * len, 0.0);
        for (std::size_t i = 0; i < len; ++i) {
            for (std::size_t v = 0; v < nv; ++v) {
                const Rational &x = pts[start + i][v];
                inputs[v * len + i] = tape.single() ? double(to_nearest_float(x)) : to_nearest_double(x);
            }
        }
        simd::evaluate(tape, inputs.data(), len, got.data() + start, bad.data() + start);
    }

    const int jobs = std::max(1, opts.jobs);
    std::vector<std::vector<SampleReport>> partial(static_cast<std::size_t>(jobs),
                                                   std::vector<SampleReport>(boxes.size()));
    auto worker = [&](int j) {
        auto &mine = partial[static_cast<std::size_t>(j)];
        for (std::size_t i = static_cast<std::size_t>(j); i < total; i += static_cast<std::size_t>(jobs)) {
            std::vector<std::size_t> hits;
            for (std::size_t b = 0; b < boxes.size(); ++b) {
                if (inside(boxes[b], pts[i])) {
                    hits.push_back(b);
                }
            }
            if (hits.empty()) {
                continue;
            }
            const PointError pe = bad[i] ? PointError{} : exact_error(spec.body, pts[i], got[i]);
            for (std::size_t b : hits) {
                ++mine[b].samples;
                merge(mine[b], pe, pts[i]);
            }
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) {
            pool.emplace_back(worker, j);
        }
        for (auto &t : pool) {
            t.join();
        }
    }

    std::vector<SampleReport> out(boxes.size());
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        out[b].seed = opts.seed;
        for (const auto &p : partial) {
            out[b].samples += p[b].samples;
            merge(out[b], p[b]);
        }
    }
    return out;
}

} // namespace

SampleReport underapprox(const FunctionSpec &spec, const PrecisionSpec &prec, const SamplerOptions &opts)
{
    return run(spec, prec, {spec.domain}, opts).front();
}

std::vector<SampleReport> underapprox_partitioned(const FunctionSpec &spec, const PrecisionSpec &prec,
                                                  const std::vector<Box> &boxes, const SamplerOptions &opts)
{
    return run(spec, prec, boxes, opts);
}

} // namespace relbound
