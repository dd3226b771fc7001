#include <relbound/affine.hpp>
#include <relbound/dataflow.hpp>
#include <relbound/errors.hpp>

#include <chrono>
#include <map>

namespace relbound
{

const char *to_string(RelMethod m) noexcept
{
    switch (m) {
        case RelMethod::ViaAbsolute:
            return "via-abs";
        case RelMethod::Direct:
            return "direct";
        case RelMethod::Naive:
            return "naive";
        case RelMethod::ForwardViaAbs:
            return "forward-via-abs";
    }
    return "?";
}

namespace
{

struct NodeState {
    Interval range; // real-valued range
    AffineForm err; // float value minus real value
};

class Forward
{
public:
    Forward(const FunctionSpec &spec, const PrecisionSpec &prec, RangeMethod rm, const RefinementConfig &cfg,
            const AbstractionOptions &opts, RangeCache &cache)
        : prec_(prec), rm_(rm), cfg_(cfg), opts_(opts), cache_(cache), dom_(Domain::from_box(spec.domain)),
          key_(RangeCache::key_of(dom_))
    {
    }

    NodeState run(const Expr &e)
    {
        NodeState s = visit(e);
        return s;
    }

    std::vector<TraceEntry> trace;
    int queries = 0;

private:
    NodeState visit(const Expr &e)
    {
        switch (e->op) {
            case Op::Const:
                return constant(e);
            case Op::Var:
                return variable(e);
            case Op::Eps:
            case Op::Delta:
                throw Error(ErrorKind::Usage, "forward analysis expects a noise-free expression");
            case Op::Neg: {
                NodeState a = visit(e->lhs);
                ++op_id_;
                return {-a.range, -a.err};
            }
            default:
                break;
        }
        NodeState a = visit(e->lhs);
        NodeState b = e->rhs ? visit(e->rhs) : NodeState{};
        const int id = op_id_++;
        const Interval combined = combine(e, a.range, b.range);
        const Interval real = range_of(e, combined);

        AffineForm err;
        switch (e->op) {
            case Op::Add:
                err = a.err + b.err;
                break;
            case Op::Sub:
                err = a.err - b.err;
                break;
            case Op::Mul:
                err = mul(b.err, a.range, src_) + mul(a.err, b.range, src_) + mul(a.err, b.err, src_);
                break;
            case Op::Div:
                err = div_error(e, a, b);
                break;
            case Op::Sqrt:
                err = sqrt_error(e, a, real);
                break;
            default:
                break;
        }

        const Interval finite = real + err.to_interval();
        if (finite.magnitude() > prec_.max_finite()) {
            throw Error(ErrorKind::Overflow, "possible overflow at " + to_string(e));
        }
        Rational fresh = finite.magnitude() * prec_.epsilon();
        const bool may_underflow = finite.min_magnitude() < prec_.min_normal();
        if (may_underflow && (e->op == Op::Mul || e->op == Op::Div || e->op == Op::Sqrt)) {
            fresh += prec_.delta();
        }
        err = err.add_noise(fresh, src_).compact(src_);
        trace.push_back({id, to_string(e), finite, fresh});
        return {real, err};
    }

    NodeState constant(const Expr &e)
    {
        ++op_id_;
        const Rational rounded = round_to_precision(e->value, prec_);
        return {Interval(e->value), AffineForm(rounded - e->value)};
    }

    NodeState variable(const Expr &e)
    {
        ++op_id_;
        const Interval &x = dom_.vars.at(static_cast<std::size_t>(e->index));
        if (!opts_.round_inputs) {
            return {x, AffineForm()};
        }
        auto it = inputs_.find(e->index);
        if (it == inputs_.end()) {
            Rational mag = x.magnitude() * prec_.epsilon();
            if (x.min_magnitude() < prec_.min_normal()) {
                mag += prec_.delta();
            }
            it = inputs_.emplace(e->index, AffineForm().add_noise(mag, src_)).first;
        }
        return {x, it->second};
    }

    static Interval combine(const Expr &e, const Interval &a, const Interval &b)
    {
        switch (e->op) {
            case Op::Add:
                return a + b;
            case Op::Sub:
                return a - b;
            case Op::Mul:
                return structurally_equal(e->lhs, e->rhs) ? square(a) : a * b;
            case Op::Div:
                if (b.contains_zero()) {
                    throw Error(ErrorKind::DivisionByZeroRange, "divisor range contains zero at " + to_string(e));
                }
                return a / b;
            case Op::Sqrt:
                if (a.lo().sign() < 0) {
                    throw Error(ErrorKind::NegativeSqrt, "sqrt argument may be negative at " + to_string(e));
                }
                return sqrt(a, kDefaultSqrtBits);
            default:
                return a;
        }
    }

    // Range of the real subexpression, intersected with the child combination.
    Interval range_of(const Expr &e, const Interval &combined)
    {
        if (rm_ == RangeMethod::IntervalOnly) {
            return combined;
        }
        Interval r = combined;
        if (rm_ == RangeMethod::AffineOnly) {
            r = range_aa(e, dom_);
        } else if (auto hit = cache_.find(e.get(), key_)) {
            r = *hit;
        } else {
            try {
                RefinedRange rr = range_refined(e, dom_, cfg_);
                queries += rr.queries;
                r = rr.range;
            } catch (const Error &err) {
                if (err.kind() != ErrorKind::DivisionByZeroRange && err.kind() != ErrorKind::NegativeSqrt) {
                    throw;
                }
            }
            cache_.store(e.get(), key_, r);
        }
        if (auto both = intersect(r, combined)) {
            return *both;
        }
        return combined;
    }

    AffineForm div_error(const Expr &e, const NodeState &x, const NodeState &y)
    {
        // 1/y^ - 1/y = -(y^ - y) / (y * y^)
        const Interval y_hat = y.range + y.err.to_interval();
        if (y_hat.contains_zero()) {
            throw Error(ErrorKind::DivisionByZeroRange, "rounded divisor range contains zero at " + to_string(e));
        }
        const Interval k = Interval(Rational(1)) / (y.range * y_hat);
        const AffineForm inv_err = mul(-y.err, k, src_);
        const Interval inv = Interval(Rational(1)) / y.range;
        return mul(inv_err, x.range, src_) + mul(x.err, inv, src_) + mul(x.err, inv_err, src_);
    }

    AffineForm sqrt_error(const Expr &e, const NodeState &x, const Interval &)
    {
        // sqrt(x^) - sqrt(x) = (x^ - x) / (sqrt(x^) + sqrt(x))
        const Interval x_hat = x.range + x.err.to_interval();
        const Interval h = hull(x.range, x_hat);
        if (h.lo().sign() < 0) {
            throw Error(ErrorKind::NegativeSqrt, "rounded sqrt argument may be negative at " + to_string(e));
        }
        if (h.lo().is_zero()) {
            throw Error(ErrorKind::DivisionByZeroRange, "sqrt argument range touches zero at " + to_string(e));
        }
        const Interval root = sqrt(h, kDefaultSqrtBits);
        const Rational two(2);
        const Interval k(Rational(1) / (two * root.hi()), Rational(1) / (two * root.lo()));
        return mul(x.err, k, src_);
    }

    const PrecisionSpec &prec_;
    RangeMethod rm_;
    const RefinementConfig &cfg_;
    AbstractionOptions opts_;
    RangeCache &cache_;
    Domain dom_;
    std::string key_;
    NoiseSource src_;
    std::map<int, AffineForm> inputs_;
    int op_id_ = 0;
};

} // namespace

AbsErrorResult forward_abs_error(const FunctionSpec &spec, const PrecisionSpec &prec, RangeMethod rm,
                                 const RefinementConfig &cfg, const AbstractionOptions &opts, RangeCache *cache)
{
    const auto t0 = std::chrono::steady_clock::now();
    RangeCache local;
    Forward fw(spec, prec, rm, cfg, opts, cache ? *cache : local);
    NodeState root = fw.run(spec.body);

    AbsErrorResult out;
    out.bound = root.err.to_interval().magnitude();
    out.result_range = root.range;
    out.method = rm;
    out.engine = "forward";
    out.queries = fw.queries;
    out.trace = std::move(fw.trace);
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

RelErrorResult rel_via_abs(const FunctionSpec &spec, const PrecisionSpec &prec, RangeMethod rm,
                           const RefinementConfig &cfg, const AbstractionOptions &opts, RangeCache *cache)
{
    const auto t0 = std::chrono::steady_clock::now();
    AbsErrorResult abs = forward_abs_error(spec, prec, rm, cfg, opts, cache);
    if (abs.result_range.contains_zero()) {
        throw Error(ErrorKind::ZeroRangeFailure,
                    "range of " + spec.name + " may contain zero: " + abs.result_range.str());
    }
    RelErrorResult out;
    out.kind = RelMethod::ForwardViaAbs;
    out.bound = abs.bound / abs.result_range.min_magnitude();
    out.first_order = out.bound;
    out.result_range = abs.result_range;
    out.queries = abs.queries;
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

} // namespace relbound
