#ifndef KMN_PARSER_HPP
#define KMN_PARSER_HPP

#include <map>
#include <set>
#include <string>

#include <kmn/expr.hpp>

namespace kmn
{

struct ParseOptions {
    // User function names accepted in applications such as h(r) or h''(r).
    std::set<std::string> functions{"f", "g", "h"};
    // Identifier renames applied to symbols, e.g. {"a", "alpha"}.
    std::map<std::string, std::string> aliases;
};

// Parses the expression grammar: integer and p/q literals, identifiers,
// + - * / ^ (right associative, unary minus binding tighter than * and /),
// parentheses, calls f(args), diff(e, v, k), fdiff(e, v, order), Gamma(e)
// and the builtins exp, log, sin, cos. Errors carry a 1-based column.
Expr parse_expression(const std::string &src, const ParseOptions &opts = {});

} // namespace kmn

#endif
