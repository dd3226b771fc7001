#include <relbound/errors.hpp>
#include <relbound/smt.hpp>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <map>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace relbound
{

std::string smt_literal(const Rational &x)
{
    if (x.sign() < 0) {
        return "(- " + smt_literal(-x) + ")";
    }
    if (x.is_integer()) {
        return x.numerator().get_str() + ".0";
    }
    return "(/ " + x.numerator().get_str() + ".0 " + x.denominator().get_str() + ".0)";
}

namespace
{

class ScriptWriter
{
public:
    std::ostringstream decls;
    std::ostringstream asserts;

    std::string emit(const Expr &e)
    {
        switch (e->op) {
            case Op::Const:
                return smt_literal(e->value);
            case Op::Var:
                return "x" + std::to_string(e->index);
            case Op::Eps:
                return "e" + std::to_string(e->index);
            case Op::Delta:
                return "d" + std::to_string(e->index);
            case Op::Neg:
                return "(- " + emit(e->lhs) + ")";
            case Op::Add:
                return "(+ " + emit(e->lhs) + " " + emit(e->rhs) + ")";
            case Op::Sub:
                return "(- " + emit(e->lhs) + " " + emit(e->rhs) + ")";
            case Op::Mul:
                return "(* " + emit(e->lhs) + " " + emit(e->rhs) + ")";
            case Op::Div:
                return "(/ " + emit(e->lhs) + " " + emit(e->rhs) + ")";
            case Op::Sqrt: {
                auto it = sqrt_.find(e.get());
                if (it != sqrt_.end()) {
                    return it->second;
                }
                const std::string name = "s" + std::to_string(sqrt_.size());
                sqrt_.emplace(e.get(), name);
                const std::string arg = emit(e->lhs);
                decls << "(declare-const " << name << " Real)\n";
                asserts << "(assert (>= " << name << " 0.0))\n";
                asserts << "(assert (= (* " << name << " " << name << ") " << arg << "))\n";
                return name;
            }
        }
        return "?";
    }

    // Auxiliary t with t = |body|, by two-sided constraints.
    std::string abs_of(const std::string &body)
    {
        const std::string name = "a" + std::to_string(abs_count_++);
        decls << "(declare-const " << name << " Real)\n";
        asserts << "(assert (>= " << name << " 0.0))\n";
        asserts << "(assert (>= " << name << " " << body << "))\n";
        asserts << "(assert (>= " << name << " (- " << body << ")))\n";
        asserts << "(assert (or (= " << name << " " << body << ") (= " << name << " (- " << body << "))))\n";
        return name;
    }

private:
    std::map<const Node *, std::string> sqrt_;
    int abs_count_ = 0;
};

void declare_box(std::ostringstream &out, const char *prefix, const std::vector<Interval> &v)
{
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string n = prefix + std::to_string(i);
        out << "(declare-const " << n << " Real)\n";
        out << "(assert (<= " << smt_literal(v[i].lo()) << " " << n << "))\n";
        out << "(assert (<= " << n << " " << smt_literal(v[i].hi()) << "))\n";
    }
}

} // namespace

std::string smt_script(const Objective &obj, const Domain &dom, const Rational &u)
{
    ScriptWriter w;
    std::ostringstream head;
    head << "(set-logic QF_NRA)\n";
    declare_box(head, "x", dom.vars);
    declare_box(head, "e", dom.eps);
    declare_box(head, "d", dom.delta);

    std::string sum = "0.0";
    for (const auto &[t, weight] : obj.terms) {
        std::string body = w.emit(t);
        if (obj.kind == Objective::Kind::AbsSum) {
            body = w.abs_of(body);
        }
        const Rational wt = obj.kind == Objective::Kind::AbsSum ? abs(weight) : weight;
        sum = "(+ " + sum + " (* " + smt_literal(wt) + " " + body + "))";
    }
    std::string goal;
    if (!obj.denominator) {
        goal = "(> " + sum + " " + smt_literal(u) + ")";
    } else {
        const std::string f = w.emit(obj.denominator);
        w.asserts << "(assert (not (= " << f << " 0.0)))\n";
        if (obj.kind == Objective::Kind::AbsSum) {
            goal = "(> " + sum + " (* " + smt_literal(u) + " " + w.abs_of(f) + "))";
        } else {
            goal = "(> (/ " + sum + " " + f + ") " + smt_literal(u) + ")";
        }
    }
    std::ostringstream out;
    out << head.str() << w.decls.str() << w.asserts.str() << "(assert " << goal << ")\n(check-sat)\n(exit)\n";
    return out.str();
}

std::string resolve_solver_path(const std::string &configured)
{
    if (!configured.empty()) {
        return configured;
    }
    if (const char *env = std::getenv("RELBOUND_SMT_SOLVER"); env != nullptr && *env != '\0') {
        return env;
    }
    return "z3";
}

ProcessResult run_process(const std::vector<std::string> &argv, const std::string &input,
                          std::chrono::milliseconds timeout)
{
    int in_pipe[2];
    int out_pipe[2];
    int err_pipe[2]; // reports exec failure
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
        throw Error(ErrorKind::Backend, std::string("pipe: ") + std::strerror(errno));
    }
    fcntl(err_pipe[1], F_SETFD, FD_CLOEXEC);
    const pid_t pid = fork();
    if (pid < 0) {
        throw Error(ErrorKind::Backend, std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(out_pipe[1], STDERR_FILENO);
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(err_pipe[0]);
        std::vector<char *> args;
        for (const auto &a : argv) {
            args.push_back(const_cast<char *>(a.c_str()));
        }
        args.push_back(nullptr);
        execvp(args[0], args.data());
        const int code = errno;
        (void)!write(err_pipe[1], &code, sizeof code);
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[1]);
    int exec_errno = 0;
    if (read(err_pipe[0], &exec_errno, sizeof exec_errno) == sizeof exec_errno) {
        close(err_pipe[0]);
        close(in_pipe[1]);
        close(out_pipe[0]);
        waitpid(pid, nullptr, 0);
        throw Error(ErrorKind::Backend, "cannot start '" + argv[0] + "': " + std::strerror(exec_errno));
    }
    close(err_pipe[0]);

    // Small scripts fit in the pipe buffer; ignore SIGPIPE-style failures.
    signal(SIGPIPE, SIG_IGN);
    std::size_t off = 0;
    while (off < input.size()) {
        const ssize_t n = write(in_pipe[1], input.data() + off, input.size() - off);
        if (n <= 0) {
            break;
        }
        off += static_cast<std::size_t>(n);
    }
    close(in_pipe[1]);

    ProcessResult res;
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    char buf[4096];
    for (;;) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            res.timed_out = true;
            kill(pid, SIGKILL);
            break;
        }
        pollfd pfd{out_pipe[0], POLLIN, 0};
        const int pr = poll(&pfd, 1, static_cast<int>(left.count()));
        if (pr < 0 && errno == EINTR) {
            continue;
        }
        if (pr == 0) {
            continue;
        }
        const ssize_t n = read(out_pipe[0], buf, sizeof buf);
        if (n <= 0) {
            break;
        }
        res.output.append(buf, static_cast<std::size_t>(n));
    }
    close(out_pipe[0]);
    int status = 0;
    waitpid(pid, &status, 0);
    if (WIFEXITED(status)) {
        res.exit_code = WEXITSTATUS(status);
    }
    return res;
}

SmtDecider::SmtDecider(const RefinementConfig &cfg) : path_(resolve_solver_path(cfg.solver_path)), timeout_(cfg.timeout)
{
}

Decision SmtDecider::exceeds(const Objective &obj, const Domain &dom, const Rational &u)
{
    ++calls_;
    const std::string script = smt_script(obj, dom, u);
    std::vector<std::string> argv{path_};
    const std::string base = path_.substr(path_.find_last_of('/') + 1);
    if (base.find("z3") != std::string::npos) {
        argv.push_back("-in");
        argv.push_back("-smt2");
        argv.push_back("-t:" + std::to_string(timeout_.count()));
    } else if (base.find("cvc5") != std::string::npos) {
        argv.push_back("--lang=smt2");
        argv.push_back("--tlimit-per=" + std::to_string(timeout_.count()));
    }
    // The solver's own limit fires first; the wall clock is the backstop.
    const ProcessResult r = run_process(argv, script, timeout_ + std::chrono::milliseconds(500));
    if (r.timed_out) {
        return Decision::Unknown;
    }
    std::istringstream in(r.output);
    std::string first;
    in >> first;
    if (first == "sat") {
        return Decision::Sat;
    }
    if (first == "unsat") {
        return Decision::Unsat;
    }
    if (first == "unknown" || first == "timeout") {
        return Decision::Unknown;
    }
    throw Error(ErrorKind::Backend, "unexpected solver output: " + r.output.substr(0, 200));
}

} // namespace relbound
