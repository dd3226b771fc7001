#ifndef RELBOUND_PARSER_HPP
#define RELBOUND_PARSER_HPP

#include <string>
#include <string_view>
#include <vector>

#include <relbound/box.hpp>
#include <relbound/expr.hpp>

namespace relbound
{

// One `def` block: Var nodes in body index into params / domain (same order).
struct FunctionSpec {
    std::string name;
    std::vector<std::string> params;
    Box domain;
    Expr body;
};

// Parses every `def` block of a source text. Throws ParseError.
std::vector<FunctionSpec> parse_file(std::string_view text);
// Exactly one `def` block expected.
FunctionSpec parse_function(std::string_view text);
// Body-only helper for tests: variables resolve against `params`.
Expr parse_expression(std::string_view text, const std::vector<std::string> &params);

// Source text accepted by parse_function; bounds print as exact decimals or p / q.
std::string to_source(const FunctionSpec &spec);

} // namespace relbound

#endif
