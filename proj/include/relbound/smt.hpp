#ifndef RELBOUND_SMT_HPP
#define RELBOUND_SMT_HPP

#include <chrono>
#include <string>
#include <vector>

#include <relbound/range.hpp>

namespace relbound
{

// SMT-LIB 2 (QF_NRA) script asserting that the objective exceeds u somewhere
// in dom. Square roots and absolute values become auxiliary constants.
std::string smt_script(const Objective &obj, const Domain &dom, const Rational &u);

// SMT-LIB real literal for an exact rational.
std::string smt_literal(const Rational &x);

// Configured path, else $RELBOUND_SMT_SOLVER, else "z3".
std::string resolve_solver_path(const std::string &configured);

struct ProcessResult {
    int exit_code = -1;
    bool timed_out = false;
    std::string output;
};

// Runs argv[0] (searched in PATH) feeding `input` on stdin; kills it after
// the timeout. Throws Error(Backend) when it cannot be started.
ProcessResult run_process(const std::vector<std::string> &argv, const std::string &input,
                          std::chrono::milliseconds timeout);

class SmtDecider final : public Decider
{
public:
    explicit SmtDecider(const RefinementConfig &cfg);

    // Throws Error(Backend) on anything but sat / unsat / unknown / timeout.
    Decision exceeds(const Objective &obj, const Domain &dom, const Rational &u) override;

    int calls() const
    {
        return calls_;
    }

private:
    std::string path_;
    std::chrono::milliseconds timeout_;
    int calls_ = 0;
};

} // namespace relbound

#endif
