#include <relbound/abstraction.hpp>

#include <map>

namespace relbound
{

namespace
{

class Abstractor
{
public:
    Abstractor(const PrecisionSpec &prec, const AbstractionOptions &opts, AbstractedExpr &out)
        : prec_(prec), opts_(opts), out_(out)
    {
    }

    Expr run(const Expr &e)
    {
        switch (e->op) {
            case Op::Const: {
                const int id = next_id_++;
                if (is_representable(e->value, prec_)) {
                    return e;
                }
                return wrap(e, id, true);
            }
            case Op::Var: {
                const int id = next_id_++;
                if (!opts_.round_inputs) {
                    return e;
                }
                // The input is rounded once; every read sees the same noise.
                auto it = vars_.find(e->index);
                if (it != vars_.end()) {
                    return it->second;
                }
                Expr w = wrap(e, id, true);
                vars_.emplace(e->index, w);
                return w;
            }
            case Op::Eps:
            case Op::Delta:
                return e;
            case Op::Neg: {
                Expr a = run(e->lhs);
                ++next_id_;
                return ex::neg(a);
            }
            case Op::Sqrt: {
                Expr a = run(e->lhs);
                return wrap(ex::sqrt(a), next_id_++, true, e);
            }
            default: {
                Expr a = run(e->lhs);
                Expr b = run(e->rhs);
                const bool has_delta = e->op == Op::Mul || e->op == Op::Div;
                return wrap(ex::make(e->op, a, b), next_id_++, has_delta, e);
            }
        }
    }

private:
    const PrecisionSpec &prec_;
    const AbstractionOptions &opts_;
    AbstractedExpr &out_;
    int next_id_ = 0;
    std::map<int, Expr> vars_;

    Expr wrap(const Expr &inner, int id, bool with_delta, const Expr &source = nullptr)
    {
        const std::string src = to_string(source ? source : inner);
        const int ei = out_.eps_count();
        out_.eps_bounds.push_back(out_.eps_bound);
        out_.registry.push_back({NoiseKind::Eps, ei, id, src});
        Expr w = ex::mul(inner, ex::add(ex::constant(1), ex::eps(ei)));
        if (with_delta) {
            const int di = out_.delta_count();
            out_.delta_bounds.push_back(out_.delta_bound);
            out_.registry.push_back({NoiseKind::Delta, di, id, src});
            w = ex::add(w, ex::delta(di));
        }
        return w;
    }
};

} // namespace

Domain AbstractedExpr::domain(const std::vector<Interval> &vars) const
{
    Domain d;
    d.vars = vars;
    d.eps.reserve(eps_bounds.size());
    for (const auto &b : eps_bounds) {
        d.eps.emplace_back(-b, b);
    }
    d.delta.reserve(delta_bounds.size());
    for (const auto &b : delta_bounds) {
        d.delta.emplace_back(-b, b);
    }
    return d;
}

AbstractedExpr abstract_fp(const Expr &e, const PrecisionSpec &prec, const AbstractionOptions &opts)
{
    AbstractedExpr out;
    out.original = e;
    out.eps_bound = prec.epsilon();
    out.delta_bound = prec.delta();
    Abstractor a(prec, opts, out);
    out.tree = a.run(e);
    return out;
}

} // namespace relbound
