#ifndef KMN_SPECIAL_HPP
#define KMN_SPECIAL_HPP

#include <kmn/rational.hpp>

namespace kmn
{

// Gamma function; throws DomainError at the poles 0, -1, -2, ...
double gamma_fn(double x);

// Riemann-Liouville derivative of order alpha (lower terminal 0) of t^p,
// evaluated at t: Gamma(p+1)/Gamma(p+1-alpha) * t^(p-alpha). Exactly 0 when
// p+1-alpha is a pole of Gamma. Requires p > -1.
double rl_power_rule(double p, double alpha, double t);
double rl_power_rule(const Rational &p, const Rational &alpha, double t);

} // namespace kmn

#endif
