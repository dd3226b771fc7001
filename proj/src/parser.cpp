#include <relbound/errors.hpp>
#include <relbound/parser.hpp>

#include <cctype>
#include <map>
#include <optional>

namespace relbound
{

namespace
{

enum class Tok {
    Ident,
    Number,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    Comma,
    Assign,
    Le,
    Lt,
    Ge,
    Gt,
    AndAnd,
    Plus,
    Minus,
    Star,
    Slash,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

const char *describe(Tok t)
{
    switch (t) {
        case Tok::Ident:
            return "identifier";
        case Tok::Number:
            return "number";
        case Tok::LParen:
            return "'('";
        case Tok::RParen:
            return "')'";
        case Tok::LBrace:
            return "'{'";
        case Tok::RBrace:
            return "'}'";
        case Tok::Colon:
            return "':'";
        case Tok::Comma:
            return "','";
        case Tok::Assign:
            return "'='";
        case Tok::Le:
            return "'<='";
        case Tok::Lt:
            return "'<'";
        case Tok::Ge:
            return "'>='";
        case Tok::Gt:
            return "'>'";
        case Tok::AndAnd:
            return "'&&'";
        case Tok::Plus:
            return "'+'";
        case Tok::Minus:
            return "'-'";
        case Tok::Star:
            return "'*'";
        case Tok::Slash:
            return "'/'";
        case Tok::End:
            return "end of input";
    }
    return "?";
}

std::vector<Token> lex(std::string_view src)
{
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') {
                advance(1);
            }
            continue;
        }
        const int l = line;
        const int cl = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
                ++j;
            }
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < src.size() && std::isdigit(src[i + 1]))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                ++j;
            }
            if (j < src.size() && src[j] == '.') {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                    ++j;
                }
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) {
                    ++k;
                }
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                        ++k;
                    }
                    j = k;
                }
            }
            out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        auto two = [&](char a, char b) { return c == a && i + 1 < src.size() && src[i + 1] == b; };
        Tok t;
        std::size_t len = 1;
        if (two('<', '=')) {
            t = Tok::Le;
            len = 2;
        } else if (two('>', '=')) {
            t = Tok::Ge;
            len = 2;
        } else if (two('&', '&')) {
            t = Tok::AndAnd;
            len = 2;
        } else {
            switch (c) {
                case '(':
                    t = Tok::LParen;
                    break;
                case ')':
                    t = Tok::RParen;
                    break;
                case '{':
                    t = Tok::LBrace;
                    break;
                case '}':
                    t = Tok::RBrace;
                    break;
                case ':':
                    t = Tok::Colon;
                    break;
                case ',':
                    t = Tok::Comma;
                    break;
                case '=':
                    t = Tok::Assign;
                    break;
                case '<':
                    t = Tok::Lt;
                    break;
                case '>':
                    t = Tok::Gt;
                    break;
                case '+':
                    t = Tok::Plus;
                    break;
                case '-':
                    t = Tok::Minus;
                    break;
                case '*':
                    t = Tok::Star;
                    break;
                case '/':
                    t = Tok::Slash;
                    break;
                default:
                    throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
            }
        }
        out.push_back({t, std::string(src.substr(i, len)), l, cl});
        advance(len);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser
{
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    bool at_end() const
    {
        return peek().kind == Tok::End;
    }

    FunctionSpec function()
    {
        expect_keyword("def");
        FunctionSpec spec;
        spec.name = expect(Tok::Ident).text;
        expect(Tok::LParen);
        if (peek().kind != Tok::RParen) {
            for (;;) {
                const Token &p = expect(Tok::Ident);
                for (const auto &q : spec.params) {
                    if (q == p.text) {
                        throw ParseError("duplicate parameter '" + p.text + "'", p.line, p.col);
                    }
                }
                spec.params.push_back(p.text);
                expect(Tok::Colon);
                expect_keyword("Real");
                if (peek().kind != Tok::Comma) {
                    break;
                }
                next();
            }
        }
        expect(Tok::RParen);
        expect(Tok::Colon);
        expect_keyword("Real");
        expect(Tok::Assign);
        const Token &open = expect(Tok::LBrace);
        params_ = &spec.params;
        spec.domain = require_clause(spec.params, open);
        spec.body = expr();
        expect(Tok::RBrace);
        params_ = nullptr;
        return spec;
    }

    Expr body_only(const std::vector<std::string> &params)
    {
        params_ = &params;
        Expr e = expr();
        if (!at_end()) {
            fail("expected end of expression");
        }
        return e;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const std::vector<std::string> *params_ = nullptr;

    const Token &peek() const
    {
        return toks_[pos_];
    }
    const Token &next()
    {
        const Token &t = toks_[pos_];
        if (t.kind != Tok::End) {
            ++pos_;
        }
        return t;
    }
    [[noreturn]] void fail(const std::string &msg) const
    {
        const Token &t = peek();
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(msg + ", found " + found, t.line, t.col);
    }
    const Token &expect(Tok k)
    {
        if (peek().kind != k) {
            fail(std::string("expected ") + describe(k));
        }
        return next();
    }
    void expect_keyword(const char *kw)
    {
        if (peek().kind != Tok::Ident || peek().text != kw) {
            fail(std::string("expected '") + kw + "'");
        }
        next();
    }

    Rational number(const Token &t)
    {
        try {
            return Rational::parse_decimal(t.text);
        } catch (const std::exception &) {
            throw ParseError("malformed number '" + t.text + "'", t.line, t.col);
        }
    }

    // ['-'] NUMBER ['/' NUMBER]
    std::optional<Rational> bound_literal()
    {
        const std::size_t save = pos_;
        bool negative = false;
        if (peek().kind == Tok::Minus) {
            negative = true;
            next();
        }
        if (peek().kind != Tok::Number) {
            pos_ = save;
            return std::nullopt;
        }
        Rational v = number(next());
        if (peek().kind == Tok::Slash) {
            next();
            const Token &d = expect(Tok::Number);
            const Rational den = number(d);
            if (den.is_zero()) {
                throw ParseError("zero denominator in bound", d.line, d.col);
            }
            v = v / den;
        }
        return negative ? -v : v;
    }

    Box require_clause(const std::vector<std::string> &params, const Token &open)
    {
        expect_keyword("require");
        expect(Tok::LParen);
        std::vector<std::optional<Rational>> lo(params.size());
        std::vector<std::optional<Rational>> hi(params.size());
        for (;;) {
            relation(params, lo, hi);
            if (peek().kind != Tok::AndAnd) {
                break;
            }
            next();
        }
        expect(Tok::RParen);
        std::vector<std::pair<std::string, Interval>> entries;
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (!lo[i] || !hi[i]) {
                throw ParseError("parameter '" + params[i] + "' needs both a lower and an upper bound", open.line,
                                 open.col);
            }
            if (*lo[i] > *hi[i]) {
                throw ParseError("empty domain for parameter '" + params[i] + "'", open.line, open.col);
            }
            entries.emplace_back(params[i], Interval(*lo[i], *hi[i]));
        }
        return Box(std::move(entries));
    }

    void relation(const std::vector<std::string> &params, std::vector<std::optional<Rational>> &lo,
                  std::vector<std::optional<Rational>> &hi)
    {
        auto operand = [&](std::optional<Rational> &lit, int &var) {
            if (auto v = bound_literal()) {
                lit = std::move(v);
                return;
            }
            const Token &t = expect(Tok::Ident);
            for (std::size_t i = 0; i < params.size(); ++i) {
                if (params[i] == t.text) {
                    var = static_cast<int>(i);
                    return;
                }
            }
            throw ParseError("unknown variable '" + t.text + "' in require clause", t.line, t.col);
        };
        std::optional<Rational> llit;
        std::optional<Rational> rlit;
        int lvar = -1;
        int rvar = -1;
        const Token start = peek();
        operand(llit, lvar);
        const Tok rel = peek().kind;
        if (rel != Tok::Le && rel != Tok::Lt && rel != Tok::Ge && rel != Tok::Gt) {
            fail("expected comparison operator");
        }
        next();
        operand(rlit, rvar);
        if ((lvar >= 0) == (rvar >= 0)) {
            throw ParseError("bound must compare one variable with one literal", start.line, start.col);
        }
        // Normalize to var <= lit (upper) or lit <= var (lower); strict bounds widen to closed ones.
        const bool less = rel == Tok::Le || rel == Tok::Lt;
        const int var = lvar >= 0 ? lvar : rvar;
        const Rational &lit = lvar >= 0 ? *rlit : *llit;
        const bool upper = (lvar >= 0) == less;
        auto &slot = upper ? hi[var] : lo[var];
        if (!slot) {
            slot = lit;
        } else {
            slot = upper ? min(*slot, lit) : max(*slot, lit);
        }
    }

    Expr expr()
    {
        Expr e = signed_term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const bool plus = next().kind == Tok::Plus;
            Expr r = term();
            e = plus ? ex::add(e, r) : ex::sub(e, r);
        }
        return e;
    }

    Expr signed_term()
    {
        if (peek().kind == Tok::Minus) {
            next();
            return ex::neg(signed_term());
        }
        return term();
    }

    Expr term()
    {
        Expr e = factor();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const bool times = next().kind == Tok::Star;
            Expr r = factor();
            e = times ? ex::mul(e, r) : ex::div(e, r);
        }
        return e;
    }

    Expr factor()
    {
        if (peek().kind == Tok::Minus) {
            next();
            return ex::neg(factor());
        }
        return primary();
    }

    Expr primary()
    {
        const Token &t = peek();
        switch (t.kind) {
            case Tok::Number:
                next();
                return ex::constant(number(t));
            case Tok::LParen: {
                next();
                Expr e = expr();
                expect(Tok::RParen);
                return e;
            }
            case Tok::Ident: {
                next();
                if (t.text == "sqrt") {
                    expect(Tok::LParen);
                    Expr e = expr();
                    expect(Tok::RParen);
                    return ex::sqrt(e);
                }
                for (std::size_t i = 0; i < params_->size(); ++i) {
                    if ((*params_)[i] == t.text) {
                        return ex::var(static_cast<int>(i), t.text);
                    }
                }
                throw ParseError("unbound variable '" + t.text + "'", t.line, t.col);
            }
            default:
                fail("expected expression");
        }
    }
};

std::string bound_source(const Rational &v)
{
    if (v.sign() < 0) {
        return "-" + bound_source(-v);
    }
    const std::string d = v.exact_decimal();
    if (!d.empty()) {
        return d;
    }
    return v.numerator().get_str() + " / " + v.denominator().get_str();
}

} // namespace

std::vector<FunctionSpec> parse_file(std::string_view text)
{
    Parser p(lex(text));
    std::vector<FunctionSpec> out;
    while (!p.at_end()) {
        out.push_back(p.function());
    }
    return out;
}

FunctionSpec parse_function(std::string_view text)
{
    Parser p(lex(text));
    FunctionSpec spec = p.function();
    if (!p.at_end()) {
        throw ParseError("expected a single function definition", 1, 1);
    }
    return spec;
}

Expr parse_expression(std::string_view text, const std::vector<std::string> &params)
{
    Parser p(lex(text));
    return p.body_only(params);
}

std::string to_source(const FunctionSpec &spec)
{
    std::string s = "def " + spec.name + "(";
    for (std::size_t i = 0; i < spec.params.size(); ++i) {
        s += (i ? ", " : "") + spec.params[i] + ": Real";
    }
    s += "): Real = {\n  require(";
    for (std::size_t i = 0; i < spec.domain.size(); ++i) {
        if (i) {
            s += " && ";
        }
        const std::string &v = spec.domain.name(i);
        s += bound_source(spec.domain[i].lo()) + " <= " + v + " && " + v + " <= " + bound_source(spec.domain[i].hi());
    }
    s += ")\n  " + to_string(spec.body) + "\n}\n";
    return s;
}

} // namespace relbound
