#include <relbound/affine.hpp>
#include <relbound/errors.hpp>
#include <relbound/range.hpp>
#include <relbound/smt.hpp>

#include <map>
#include <queue>

namespace relbound
{

const char *to_string(RangeMethod m) noexcept
{
    switch (m) {
        case RangeMethod::IntervalOnly:
            return "interval";
        case RangeMethod::AffineOnly:
            return "affine";
        case RangeMethod::IntervalWithRefinement:
            return "refined";
    }
    return "?";
}

const char *to_string(Backend b) noexcept
{
    return b == Backend::InternalBranchAndBound ? "internal" : "smt";
}

void RefinementConfig::validate() const
{
    if (timeout.count() <= 0) {
        throw Error(ErrorKind::Usage, "timeout must be positive");
    }
    if (gap.sign() <= 0 || gap >= Rational(1)) {
        throw Error(ErrorKind::Usage, "gap must lie in (0, 1)");
    }
    if (max_bisections < 0 || endpoint_steps < 0) {
        throw Error(ErrorKind::Usage, "budgets must be nonnegative");
    }
}

Objective Objective::signed_expr(Expr e, Rational weight)
{
    Objective o;
    o.kind = Kind::Signed;
    o.terms.emplace_back(std::move(e), std::move(weight));
    return o;
}

Objective Objective::abs_expr(Expr e)
{
    Objective o;
    o.kind = Kind::AbsSum;
    o.terms.emplace_back(std::move(e), Rational(1));
    return o;
}

Interval range_ia(const Expr &e, const Box &box)
{
    return eval_interval(e, Domain::from_box(box));
}

Interval range_ia(const Expr &e, const Domain &dom)
{
    return eval_interval(e, dom);
}

namespace
{

class AffineEvaluator
{
public:
    explicit AffineEvaluator(const Domain &dom) : dom_(dom), src_(1) {}

    AffineForm run(const Expr &e)
    {
        switch (e->op) {
            case Op::Const:
                return AffineForm(e->value);
            case Op::Var:
                return symbol(SymbolKind::Var, e->index, dom_.vars.at(e->index));
            case Op::Eps:
                return noise(SymbolKind::Eps, e->index, dom_.eps);
            case Op::Delta:
                return noise(SymbolKind::Delta, e->index, dom_.delta);
            case Op::Neg:
                return -run(e->lhs);
            case Op::Add:
                return run(e->lhs) + run(e->rhs);
            case Op::Sub:
                return run(e->lhs) - run(e->rhs);
            case Op::Mul:
                return mul(run(e->lhs), run(e->rhs), src_).compact(src_);
            case Op::Div:
                return div(run(e->lhs), run(e->rhs), src_).compact(src_);
            case Op::Sqrt:
                return sqrt(run(e->lhs), src_, kDefaultSqrtBits).compact(src_);
        }
        throw std::logic_error("bad op");
    }

private:
    const Domain &dom_;
    NoiseSource src_;
    std::map<Symbol, AffineForm> symbols_;

    AffineForm noise(SymbolKind k, int index, const std::vector<Interval> &v)
    {
        if (index < 0 || static_cast<std::size_t>(index) >= v.size()) {
            return AffineForm(Rational(0));
        }
        return symbol(k, index, v[index]);
    }

    // Every occurrence of a symbol shares one noise term.
    AffineForm symbol(SymbolKind k, int index, const Interval &x)
    {
        const Symbol s{k, index};
        auto it = symbols_.find(s);
        if (it == symbols_.end()) {
            it = symbols_.emplace(s, AffineForm::from_interval(x, src_)).first;
        }
        return it->second;
    }
};

} // namespace

Interval range_aa(const Expr &e, const Domain &dom)
{
    AffineEvaluator ev(dom);
    return ev.run(e).to_interval();
}

Interval range_aa(const Expr &e, const Box &box)
{
    return range_aa(e, Domain::from_box(box));
}

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::optional<Interval> denominator_on(const Objective &obj, const Domain &dom, ErrorKind &fail)
{
    std::optional<Interval> d;
    try {
        d = eval_interval(obj.denominator, dom);
    } catch (const Error &e) {
        fail = e.kind();
    }
    if (obj.denominator_range) {
        if (d) {
            auto x = intersect(*d, *obj.denominator_range);
            d = x ? *x : *obj.denominator_range;
        } else {
            d = *obj.denominator_range;
        }
    }
    if (d && d->contains_zero()) {
        fail = ErrorKind::DivisionByZeroRange;
        return std::nullopt;
    }
    return d;
}

// Sound upper bound of the objective over dom, or nullopt when IA cannot bound it.
std::optional<Rational> upper_on(const Objective &obj, const Domain &dom, ErrorKind &fail)
{
    Rational abs_sum;
    Interval sum(Rational(0));
    try {
        for (const auto &[t, w] : obj.terms) {
            const Interval r = eval_interval(t, dom);
            if (obj.kind == Objective::Kind::AbsSum) {
                abs_sum += abs(w) * r.magnitude();
            } else {
                sum = sum + Interval(w) * r;
            }
        }
    } catch (const Error &e) {
        fail = e.kind();
        return std::nullopt;
    }
    if (!obj.denominator) {
        return obj.kind == Objective::Kind::AbsSum ? abs_sum : sum.hi();
    }
    const auto d = denominator_on(obj, dom, fail);
    if (!d) {
        return std::nullopt;
    }
    if (obj.kind == Objective::Kind::AbsSum) {
        return abs_sum / d->min_magnitude();
    }
    return (sum / *d).hi();
}

// Certified lower bound on the objective value at a point (point domain).
std::optional<Rational> value_at(const Objective &obj, const Domain &point)
{
    try {
        Rational abs_sum;
        Interval sum(Rational(0));
        for (const auto &[t, w] : obj.terms) {
            const Interval r = eval_interval(t, point);
            if (obj.kind == Objective::Kind::AbsSum) {
                abs_sum += abs(w) * r.min_magnitude();
            } else {
                sum = sum + Interval(w) * r;
            }
        }
        if (!obj.denominator) {
            return obj.kind == Objective::Kind::AbsSum ? abs_sum : sum.lo();
        }
        const Interval d = eval_interval(obj.denominator, point);
        if (d.contains_zero()) {
            return std::nullopt;
        }
        if (obj.kind == Objective::Kind::AbsSum) {
            return abs_sum / d.magnitude();
        }
        return (sum / d).lo();
    } catch (const Error &) {
        return std::nullopt;
    }
}

std::vector<Interval> points_of(const std::vector<Interval> &v, int which)
{
    std::vector<Interval> out;
    out.reserve(v.size());
    for (const auto &x : v) {
        out.emplace_back(which == 0 ? Rational(0) : (which > 0 ? x.hi() : x.lo()));
    }
    return out;
}

// Best certified value among a few points of the box: the midpoint of the
// real dimensions combined with noise at zero and at both noise corners.
std::vector<Interval> corner_of(const std::vector<Interval> &v, int which)
{
    std::vector<Interval> out;
    out.reserve(v.size());
    for (const auto &x : v) {
        out.emplace_back(which == 0 ? x.midpoint() : (which > 0 ? x.hi() : x.lo()));
    }
    return out;
}

// Best certified value among a few points of the box: the midpoint and the
// two extreme corners of the real dimensions with noise at zero, then the
// midpoint with noise at both noise corners.
std::optional<Rational> lower_on(const Objective &obj, const Domain &box)
{
    std::optional<Rational> best;
    auto consider = [&](const Domain &p) {
        auto v = value_at(obj, p);
        if (v && (!best || *v > *best)) {
            best = std::move(v);
        }
    };
    Domain p;
    for (int which : {0, -1, 1}) {
        p.vars = corner_of(box.vars, which);
        consider(p);
    }
    if (!box.eps.empty() || !box.delta.empty()) {
        p.vars = corner_of(box.vars, 0);
        for (int which : {1, -1}) {
            p.eps = points_of(box.eps, which);
            p.delta = points_of(box.delta, which);
            consider(p);
        }
    }
    return best;
}

int widest_dimension(const std::vector<Interval> &vars)
{
    int best = -1;
    Rational w;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const Rational wi = vars[i].width();
        if (wi.sign() > 0 && (best < 0 || wi > w)) {
            best = static_cast<int>(i);
            w = wi;
        }
    }
    return best;
}

struct Item {
    std::vector<Interval> vars;
    std::optional<Rational> ub; // nullopt: unbounded so far
    std::uint64_t seq;
};

struct ItemOrder {
    bool operator()(const Item &a, const Item &b) const
    {
        // true when a has lower priority than b
        if (a.ub.has_value() != b.ub.has_value()) {
            return a.ub.has_value();
        }
        if (a.ub && *a.ub != *b.ub) {
            return *a.ub < *b.ub;
        }
        return a.seq > b.seq;
    }
};

struct Search {
    std::optional<Rational> upper; // nullopt: some box stayed unbounded
    std::optional<Rational> lower;
    bool complete = false;  // gap met, or nothing left to split
    bool exhausted = false; // budget or timeout hit
    int bisections = 0;
    ErrorKind fail = ErrorKind::DivisionByZeroRange;
    Decision decision = Decision::Unknown;
};

bool gap_met(const Rational &ub, const Rational &lb, const Rational &gap, const Rational &abs_tol)
{
    const Rational diff = ub - lb;
    return diff <= gap * abs(lb) || diff <= abs_tol;
}

// Best-first branch and bound. With a threshold, answers "objective > u"
// instead of optimizing.
Search branch_and_bound(const Objective &obj, const Domain &dom, const RefinementConfig &cfg,
                        const std::optional<Rational> &threshold, const Rational &abs_tol = Rational(0))
{
    const auto deadline = Clock::now() + cfg.timeout;
    Search s;
    std::priority_queue<Item, std::vector<Item>, ItemOrder> queue;
    std::vector<Item> leaves;
    std::uint64_t seq = 0;
    Domain work = dom;

    auto consider = [&](std::optional<Rational> v) {
        if (v && (!s.lower || *v > *s.lower)) {
            s.lower = std::move(v);
        }
    };

    queue.push(Item{dom.vars, upper_on(obj, dom, s.fail), seq++});
    consider(lower_on(obj, dom));

    while (!queue.empty()) {
        const Item &top = queue.top();
        if (threshold && s.lower && *s.lower > *threshold) {
            s.decision = Decision::Sat;
            break;
        }
        if (top.ub) {
            if (threshold ? *top.ub <= *threshold : (s.lower && *top.ub <= *s.lower)) {
                queue.pop();
                continue;
            }
            if (!threshold && s.lower && gap_met(*top.ub, *s.lower, cfg.gap, abs_tol)) {
                s.complete = true;
                break;
            }
        }
        if (s.bisections >= cfg.max_bisections || Clock::now() >= deadline) {
            s.exhausted = true;
            break;
        }
        Item it = top;
        queue.pop();
        const int dim = widest_dimension(it.vars);
        if (dim < 0) {
            leaves.push_back(std::move(it));
            continue;
        }
        const Interval &x = it.vars[dim];
        const Rational mid = x.midpoint();
        for (const Interval &half : {Interval(x.lo(), mid), Interval(mid, x.hi())}) {
            Item child{it.vars, std::nullopt, seq++};
            child.vars[dim] = half;
            work.vars = child.vars;
            child.ub = upper_on(obj, work, s.fail);
            // Never looser than the parent: keeps the bound monotone in the budget.
            if (it.ub && (!child.ub || *it.ub < *child.ub)) {
                child.ub = it.ub;
            }
            consider(lower_on(obj, work));
            queue.push(std::move(child));
        }
        ++s.bisections;
    }
    if (queue.empty() && s.decision != Decision::Sat) {
        s.complete = true;
    }

    bool unbounded = false;
    std::optional<Rational> ub = s.lower;
    auto fold = [&](const Item &it) {
        if (!it.ub) {
            unbounded = true;
        } else if (!ub || *it.ub > *ub) {
            ub = it.ub;
        }
    };
    while (!queue.empty()) {
        fold(queue.top());
        queue.pop();
    }
    for (const auto &it : leaves) {
        fold(it);
    }
    s.upper = unbounded ? std::nullopt : ub;
    if (threshold && s.decision != Decision::Sat) {
        if (!unbounded && s.upper && *s.upper <= *threshold) {
            s.decision = Decision::Unsat;
        }
    }
    return s;
}

class InternalDecider final : public Decider
{
public:
    explicit InternalDecider(const RefinementConfig &cfg) : cfg_(cfg) {}

    Decision exceeds(const Objective &obj, const Domain &dom, const Rational &u) override
    {
        return branch_and_bound(obj, dom, cfg_, u).decision;
    }

private:
    RefinementConfig cfg_;
};

// Bisection on a candidate bound: lo is attained, hi is known sound.
struct Bisected {
    Rational hi;
    int queries = 0;
    bool degraded = false;
};

Bisected bisect_upper(Decider &dec, const Objective &obj, const Domain &dom, Rational lo, Rational hi,
                      const RefinementConfig &cfg)
{
    Bisected b{hi};
    try {
        for (int step = 0; step < cfg.endpoint_steps; ++step) {
            if (b.hi - lo <= cfg.gap * max(abs(lo), abs(b.hi))) {
                break;
            }
            const Rational c = (lo + b.hi) * Rational(1, 2);
            ++b.queries;
            switch (dec.exceeds(obj, dom, c)) {
                case Decision::Unsat:
                    b.hi = c;
                    break;
                case Decision::Sat:
                case Decision::Unknown: // conservative: keep the sound side
                    lo = c;
                    break;
            }
        }
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::Backend) {
            throw;
        }
        b.hi = hi;
        b.degraded = true;
    }
    return b;
}

Objective negated(const Expr &e)
{
    return Objective::signed_expr(e, Rational(-1));
}

} // namespace

std::unique_ptr<Decider> make_decider(const RefinementConfig &cfg)
{
    if (cfg.backend == Backend::ExternalSmtProcess) {
        return std::make_unique<SmtDecider>(cfg);
    }
    return std::make_unique<InternalDecider>(cfg);
}

BoundResult maximize(const Objective &obj, const Domain &dom, const RefinementConfig &cfg)
{
    const auto t0 = Clock::now();
    BoundResult r;
    r.backend = cfg.backend;
    if (cfg.backend == Backend::InternalBranchAndBound) {
        const Search s = branch_and_bound(obj, dom, cfg, std::nullopt);
        if (!s.upper) {
            throw Error(s.fail, "no finite bound: objective undefined on part of the domain");
        }
        r.value = *s.upper;
        r.lower = s.lower.value_or(r.value);
        r.bisections = s.bisections;
        r.query_count = 1;
        if (s.complete && s.lower) {
            if (s.lower->sign() > 0) {
                r.achieved_gap = (r.value - *s.lower) / *s.lower;
            } else if (r.value == *s.lower) {
                r.achieved_gap = Rational(0);
            }
        }
        r.wall_seconds = seconds_since(t0);
        return r;
    }
    ErrorKind fail = ErrorKind::DivisionByZeroRange;
    const auto ub = upper_on(obj, dom, fail);
    if (!ub) {
        throw Error(fail, "no finite bound: objective undefined on part of the domain");
    }
    const Rational lo = lower_on(obj, dom).value_or(*ub);
    SmtDecider dec(cfg);
    const Bisected b = bisect_upper(dec, obj, dom, min(lo, *ub), *ub, cfg);
    r.value = b.hi;
    r.lower = min(lo, b.hi);
    r.query_count = b.queries;
    r.degraded = b.degraded;
    if (r.lower.sign() > 0) {
        r.achieved_gap = (r.value - r.lower) / r.lower;
    }
    r.wall_seconds = seconds_since(t0);
    return r;
}

BoundResult maximize_abs(const Expr &e, const Domain &dom, const RefinementConfig &cfg)
{
    return maximize(Objective::abs_expr(e), dom, cfg);
}

RefinedRange range_refined(const Expr &e, const Domain &dom, const RefinementConfig &cfg)
{
    const Interval ia = range_ia(e, dom);
    RefinedRange out{ia, ia};
    if (ia.is_point()) {
        return out;
    }
    // Endpoint accuracy below a small fraction of the IA width is not worth the queries.
    const Rational abs_tol = ia.width() * cfg.gap * Rational(1, 64);
    Rational hi = ia.hi();
    Rational lo = ia.lo();
    if (cfg.backend == Backend::InternalBranchAndBound) {
        const Search up = branch_and_bound(Objective::signed_expr(e), dom, cfg, std::nullopt, abs_tol);
        const Search down = branch_and_bound(negated(e), dom, cfg, std::nullopt, abs_tol);
        out.queries = 2;
        if (up.upper) {
            hi = min(hi, *up.upper);
        }
        if (down.upper) {
            lo = max(lo, -*down.upper);
        }
    } else {
        SmtDecider dec(cfg);
        const Objective up = Objective::signed_expr(e);
        const Objective down = negated(e);
        const Rational up_seen = min(lower_on(up, dom).value_or(hi), hi);
        const Bisected bu = bisect_upper(dec, up, dom, up_seen, hi, cfg);
        Bisected bd{-lo};
        if (!bu.degraded) {
            const Rational down_seen = min(lower_on(down, dom).value_or(-lo), -lo);
            bd = bisect_upper(dec, down, dom, down_seen, -lo, cfg);
        }
        out.queries = bu.queries + bd.queries;
        out.degraded = bu.degraded || bd.degraded;
        if (out.degraded) {
            return out;
        }
        hi = bu.hi;
        lo = -bd.hi;
    }
    out.range = Interval(lo, hi);
    return out;
}

Interval range_by(RangeMethod m, const Expr &e, const Domain &dom, const RefinementConfig &cfg)
{
    switch (m) {
        case RangeMethod::IntervalOnly:
            return range_ia(e, dom);
        case RangeMethod::AffineOnly:
            return range_aa(e, dom);
        case RangeMethod::IntervalWithRefinement:
            return range_refined(e, dom, cfg).range;
    }
    return range_ia(e, dom);
}

std::optional<Interval> RangeCache::find(const Node *n, const std::string &key) const
{
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find({n, key});
    if (it == map_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void RangeCache::store(const Node *n, const std::string &key, const Interval &r)
{
    std::lock_guard<std::mutex> lock(mu_);
    map_.insert_or_assign({n, key}, r);
}

std::string RangeCache::key_of(const Domain &dom)
{
    std::string k;
    for (const auto *v : {&dom.vars, &dom.eps, &dom.delta}) {
        for (const auto &x : *v) {
            k += x.lo().str() + "," + x.hi().str() + ";";
        }
        k += "|";
    }
    return k;
}

} // namespace relbound
