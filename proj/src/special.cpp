#include <kmn/special.hpp>

#include <cmath>

#include <kmn/errors.hpp>

namespace kmn
{

double gamma_fn(double x)
{
    if (x <= 0 && std::floor(x) == x) {
        throw DomainError("Gamma has a pole at " + std::to_string(x));
    }
    return std::tgamma(x);
}

double rl_power_rule(double p, double alpha, double t)
{
    if (p <= -1) {
        throw DomainError("power rule needs exponent > -1, got " + std::to_string(p));
    }
    const double lower = p + 1 - alpha;
    if (lower <= 0 && std::abs(lower - std::round(lower)) < 1e-12) {
        return 0.0;
    }
    return gamma_fn(p + 1) / gamma_fn(lower) * std::pow(t, p - alpha);
}

double rl_power_rule(const Rational &p, const Rational &alpha, double t)
{
    if (p <= Rational(-1)) {
        throw DomainError("power rule needs exponent > -1, got " + p.to_string());
    }
    const Rational lower = p + Rational(1) - alpha;
    if (lower.is_integer() && lower.sign() <= 0) {
        return 0.0;
    }
    return gamma_fn(p.to_double() + 1) / gamma_fn(lower.to_double()) * std::pow(t, (p - alpha).to_double());
}

} // namespace kmn
