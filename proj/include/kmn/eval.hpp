#ifndef KMN_EVAL_HPP
#define KMN_EVAL_HPP

#include <map>
#include <string>

#include <kmn/expr.hpp>

namespace kmn
{

using Point = std::map<std::string, double>;

// Double evaluation. Free symbols must be bound in point; unresolved
// fractional derivative nodes and unknown functions are rejected. Negative
// bases with rational exponents of odd denominator take the real root.
double eval_numeric(const Expr &e, const Point &point);

} // namespace kmn

#endif
