#include <relbound/dataflow.hpp>
#include <relbound/subdivision.hpp>
#include <relbound/taylor.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <thread>

namespace relbound
{

const char *to_string(SubdivisionMethod m) noexcept
{
    return m == SubdivisionMethod::Direct ? "direct" : "via-abs-forward";
}

int SubdivisionReport::failure_count() const
{
    return static_cast<int>(failed.size());
}

SubdivisionPlan plan_subdivision(const Box &box, int m, int budget)
{
    if (m < 1 || budget < 1) {
        throw Error(ErrorKind::Usage, "subdivision needs m >= 1 and budget >= 1");
    }
    SubdivisionPlan plan;
    plan.m = m;
    plan.budget = budget;
    const long n = static_cast<long>(box.size());
    const long room = budget - n;
    if (room < 1) {
        plan.warning = "budget " + std::to_string(budget) + " leaves no room for " + std::to_string(n) +
                       " variables; not subdividing";
    }
    std::size_t k = 0;
    if (m > 1 && room >= m) {
        long pieces = m;
        while (static_cast<long>(k) < n && pieces <= room) {
            ++k;
            pieces *= m;
        }
    }

    std::vector<std::size_t> order(box.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return box[a].width() > box[b].width(); });
    plan.chosen.assign(order.begin(), order.begin() + static_cast<long>(k));

    plan.boxes.push_back(box);
    // Sorting chosen by position keeps the product in declaration-lexicographic order.
    std::vector<std::size_t> by_position = plan.chosen;
    std::sort(by_position.begin(), by_position.end());
    for (std::size_t var : by_position) {
        std::vector<Box> next;
        const Interval &x = box[var];
        for (const Box &b : plan.boxes) {
            for (int j = 0; j < m; ++j) {
                const Rational lo = x.lo() + x.width() * Rational(j, m);
                const Rational hi = j + 1 == m ? x.hi() : x.lo() + x.width() * Rational(j + 1, m);
                next.push_back(b.with(var, Interval(lo, hi)));
            }
        }
        plan.boxes = std::move(next);
    }
    return plan;
}

namespace
{

Rational relative_bound(const FunctionSpec &spec, const PrecisionSpec &prec, SubdivisionMethod method,
                        const RefinementConfig &cfg, const SubdivisionOptions &opts)
{
    if (method == SubdivisionMethod::Direct) {
        return taylor_rel_direct(spec, prec, cfg, opts.abstraction).bound;
    }
    return rel_via_abs(spec, prec, opts.range_method, cfg, opts.abstraction).bound;
}

Rational absolute_bound(const FunctionSpec &spec, const PrecisionSpec &prec, SubdivisionMethod method,
                        const RefinementConfig &cfg, const SubdivisionOptions &opts)
{
    if (method == SubdivisionMethod::Direct) {
        return taylor_abs(spec, prec, cfg, opts.abstraction).bound;
    }
    return forward_abs_error(spec, prec, opts.range_method, cfg, opts.abstraction).bound;
}

SubdomainOutcome analyze_piece(const FunctionSpec &whole, const Box &box, const PrecisionSpec &prec,
                               SubdivisionMethod method, const RefinementConfig &cfg, const SubdivisionOptions &opts,
                               const std::optional<Rational> &cap)
{
    const auto t0 = std::chrono::steady_clock::now();
    SubdomainOutcome out;
    out.box = box;
    FunctionSpec piece = whole;
    piece.domain = box;
    try {
        out.rel = relative_bound(piece, prec, method, cfg, opts);
        if (cap && *cap < *out.rel) {
            out.rel = *cap;
        }
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::ZeroRangeFailure) {
            out.error = e.what();
        } else if (cap) {
            // The whole box is certified zero-free, so this piece is too.
            out.rel = *cap;
        } else {
            try {
                out.abs = absolute_bound(piece, prec, method, cfg, opts);
            } catch (const Error &inner) {
                out.error = inner.what();
            }
        }
    }
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

} // namespace

SubdivisionReport analyze_subdivided(const FunctionSpec &spec, const PrecisionSpec &prec, SubdivisionMethod method,
                                     const SubdivisionPlan &plan, const RefinementConfig &cfg,
                                     const SubdivisionOptions &opts)
{
    const auto t0 = std::chrono::steady_clock::now();
    SubdivisionReport rep;
    rep.total = static_cast<int>(plan.boxes.size());
    if (opts.cap_with_whole) {
        try {
            rep.whole_bound = relative_bound(spec, prec, method, cfg, opts);
        } catch (const Error &) {
        }
    }

    rep.per_subdomain.resize(plan.boxes.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < plan.boxes.size(); i = next++) {
            rep.per_subdomain[i] = analyze_piece(spec, plan.boxes[i], prec, method, cfg, opts, rep.whole_bound);
        }
    };
    const int jobs = std::max(1, std::min(opts.jobs, rep.total));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }

    for (const auto &o : rep.per_subdomain) {
        if (o.rel) {
            rep.rel_bound = rep.rel_bound ? max(*rep.rel_bound, *o.rel) : *o.rel;
        } else if (o.abs) {
            rep.failed.emplace_back(o.box, *o.abs);
        }
        if (!o.error.empty()) {
            rep.errors.push_back(o.box.str() + ": " + o.error);
        }
    }
    rep.suppressed = rep.total > 0 && 5 * rep.failure_count() >= 4 * rep.total;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace relbound
