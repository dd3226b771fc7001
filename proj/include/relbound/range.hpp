#ifndef RELBOUND_RANGE_HPP
#define RELBOUND_RANGE_HPP

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <relbound/box.hpp>
#include <relbound/eval.hpp>
#include <relbound/expr.hpp>
#include <relbound/interval.hpp>

namespace relbound
{

enum class RangeMethod { IntervalOnly, AffineOnly, IntervalWithRefinement };
enum class Backend { InternalBranchAndBound, ExternalSmtProcess };

const char *to_string(RangeMethod m) noexcept;
const char *to_string(Backend b) noexcept;

struct RefinementConfig {
    Backend backend = Backend::InternalBranchAndBound;
    std::chrono::milliseconds timeout{1000}; // per query, wall clock
    Rational gap{1, 100};                    // relative gap target
    int max_bisections = 2000;
    int endpoint_steps = 30; // bisection steps per endpoint (solver backend)
    std::string solver_path; // empty: $RELBOUND_SMT_SOLVER, then "z3"

    // Throws Error(Usage) when timeout <= 0 or gap is outside (0, 1).
    void validate() const;
};

struct BoundResult {
    Rational value; // sound upper bound
    Rational lower; // value attained at some point of the domain (certified)
    std::optional<Rational> achieved_gap;
    Backend backend = Backend::InternalBranchAndBound;
    int query_count = 0;
    int bisections = 0;
    double wall_seconds = 0;
    bool degraded = false; // solver failed, interval fallback used
};

// Either max of sum_i w_i * t_i (Signed) or of sum_i w_i * |t_i| (AbsSum),
// optionally divided by a denominator (in absolute value for AbsSum).
// denominator_range, when set, is a certified zero-free enclosure of the
// denominator over the whole domain and is intersected with every box bound.
struct Objective {
    enum class Kind { Signed, AbsSum };
    Kind kind = Kind::AbsSum;
    std::vector<std::pair<Expr, Rational>> terms;
    Expr denominator;
    std::optional<Interval> denominator_range;

    static Objective signed_expr(Expr e, Rational weight = Rational(1));
    static Objective abs_expr(Expr e);
};

Interval range_ia(const Expr &e, const Box &box);
Interval range_ia(const Expr &e, const Domain &dom);
Interval range_aa(const Expr &e, const Box &box);
Interval range_aa(const Expr &e, const Domain &dom);

struct RefinedRange {
    Interval range;
    Interval ia;
    bool degraded = false;
    int queries = 0;
};

// Subset of range_ia, superset of the true range.
RefinedRange range_refined(const Expr &e, const Domain &dom, const RefinementConfig &cfg);
inline RefinedRange range_refined(const Expr &e, const Box &box, const RefinementConfig &cfg)
{
    return range_refined(e, Domain::from_box(box), cfg);
}

Interval range_by(RangeMethod m, const Expr &e, const Domain &dom, const RefinementConfig &cfg);

// Sound upper bound on the maximum of the objective over dom. Noise
// dimensions are never split. Throws Error(DivisionByZeroRange / NegativeSqrt)
// only when no finite bound exists within the budget.
BoundResult maximize(const Objective &obj, const Domain &dom, const RefinementConfig &cfg);
BoundResult maximize_abs(const Expr &e, const Domain &dom, const RefinementConfig &cfg);

enum class Decision { Sat, Unsat, Unknown };

// Answers "exists a point of dom where the objective exceeds u".
class Decider
{
public:
    virtual ~Decider() = default;
    // Throws Error(Backend) when the backend itself fails.
    virtual Decision exceeds(const Objective &obj, const Domain &dom, const Rational &u) = 0;
};

std::unique_ptr<Decider> make_decider(const RefinementConfig &cfg);

// Refined per-node ranges keyed by (node, domain). Thread-safe.
class RangeCache
{
public:
    std::optional<Interval> find(const Node *n, const std::string &key) const;
    void store(const Node *n, const std::string &key, const Interval &r);
    static std::string key_of(const Domain &dom);

private:
    mutable std::mutex mu_;
    std::map<std::pair<const Node *, std::string>, Interval> map_;
};

} // namespace relbound

#endif
