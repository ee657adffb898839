#include <kmn/eval.hpp>

#include <cmath>

#include <kmn/errors.hpp>
#include <kmn/special.hpp>

namespace kmn
{

namespace
{

double eval_power(const Expr &e, const Point &point)
{
    const double b = eval_numeric(e.base(), point);
    const auto &x = e.exponent();
    if (x.is_number()) {
        const auto &q = x.value();
        if (q.is_integer()) {
            if (b == 0 && q.is_negative()) {
                throw DivisionByZeroError("zero raised to " + q.to_string());
            }
            return std::pow(b, q.to_double());
        }
        if (b < 0) {
            if (q.denominator() % 2 == 0) {
                throw DomainError("even root of a negative number in " + e.str());
            }
            const double mag = std::pow(-b, q.to_double());
            return q.numerator() % 2 == 0 ? mag : -mag;
        }
        return std::pow(b, q.to_double());
    }
    const double xv = eval_numeric(x, point);
    if (b < 0) {
        throw DomainError("negative base with symbolic exponent in " + e.str());
    }
    return std::pow(b, xv);
}

} // namespace

double eval_numeric(const Expr &e, const Point &point)
{
    switch (e.kind()) {
        case Kind::number:
            return e.value().to_double();
        case Kind::symbol: {
            const auto it = point.find(e.name());
            if (it == point.end()) {
                throw UnboundSymbolError("unbound symbol " + e.name());
            }
            return it->second;
        }
        case Kind::sum: {
            long double s = 0;
            for (const auto &a : e.args()) {
                s += eval_numeric(a, point);
            }
            return static_cast<double>(s);
        }
        case Kind::product: {
            double p = 1;
            for (const auto &a : e.args()) {
                p *= eval_numeric(a, point);
            }
            return p;
        }
        case Kind::power:
            return eval_power(e, point);
        case Kind::function: {
            const auto &n = e.name();
            if (!is_builtin_function(n)) {
                throw UnboundSymbolError("cannot evaluate unknown function " + n);
            }
            const double a = eval_numeric(e.args()[0], point);
            if (n == "exp") {
                return std::exp(a);
            }
            if (n == "sin") {
                return std::sin(a);
            }
            if (n == "cos") {
                return std::cos(a);
            }
            if (a <= 0) {
                throw DomainError("log of a nonpositive number");
            }
            return std::log(a);
        }
        case Kind::gamma:
            return gamma_fn(eval_numeric(e.args()[0], point));
        case Kind::derivative:
            throw UnsupportedError("cannot evaluate unevaluated derivative " + e.str());
        case Kind::frac_derivative:
            throw UnsupportedError("fractional derivative nodes are evaluated by the numerics module: " + e.str());
    }
    return 0;
}

} // namespace kmn
