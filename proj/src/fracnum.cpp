#include <kmn/fracnum.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include <kmn/calculus.hpp>
#include <kmn/errors.hpp>

namespace kmn
{

namespace
{

const Expr fd_holder = sym("__fd");

double rl_term(const Expr &j, const Expr &alpha, double v, const Point &point)
{
    if (j.is_number() && alpha.is_number()) {
        return rl_power_rule(j.value(), alpha.value(), v);
    }
    return rl_power_rule(eval_numeric(j, point), eval_numeric(alpha, point), v);
}

// Replaces applications of the unknown (and its derivatives) by h_closed in
// the variable of application.
Expr instantiate(const Expr &e, const std::string &unknown, const std::string &var, const Expr &h_closed)
{
    if (e.kind() == Kind::function && e.name() == unknown) {
        if (e.args().size() != 1) {
            throw UnsupportedError("unknown " + unknown + " must take one argument");
        }
        const Expr d = diff(h_closed, var, e.order());
        const Expr &a = e.args()[0];
        return a.is_symbol(var) ? d : substitute(d, {{var, a}});
    }
    if (e.args().empty()) {
        return e;
    }
    std::vector<Expr> args;
    args.reserve(e.args().size());
    for (const auto &a : e.args()) {
        args.push_back(instantiate(a, unknown, var, h_closed));
    }
    return with_args(e, std::move(args));
}

void find_fd(const Expr &e, std::vector<Expr> &out)
{
    if (e.kind() == Kind::frac_derivative) {
        out.push_back(e);
        return;
    }
    for (const auto &a : e.args()) {
        find_fd(a, out);
    }
}

} // namespace

void Grid::validate() const
{
    if (steps < 2 || values.size() != steps) {
        throw DomainError("grid needs at least 2 nodes and one value per node");
    }
    if (!(t1 > t0) || t0 < 0) {
        throw DomainError("grid requires 0 <= t0 < t1");
    }
}

Grid Grid::sample(const std::function<double(double)> &f, double t0, double t1, std::size_t steps)
{
    Grid g{t0, t1, steps, {}};
    if (steps < 2) {
        throw DomainError("grid needs at least 2 nodes");
    }
    g.values.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        g.values.push_back(f(g.node(i)));
    }
    return g;
}

std::vector<long double> gl_weights(double alpha, std::size_t count)
{
    std::vector<long double> w(count);
    if (count == 0) {
        return w;
    }
    w[0] = 1;
    const long double a1 = static_cast<long double>(alpha) + 1;
    for (std::size_t i = 1; i < count; ++i) {
        w[i] = w[i - 1] * (1 - a1 / static_cast<long double>(i));
    }
    return w;
}

Grid gl_rl_derivative(const Grid &samples, const FracConfig &cfg)
{
    if (!(cfg.alpha > 0 && cfg.alpha < 1)) {
        throw DomainError("alpha must lie in (0, 1)");
    }
    samples.validate();
    if (cfg.history_start > samples.t0) {
        throw DomainError("history_start must not exceed the first node");
    }
    const auto w = gl_weights(cfg.alpha, samples.steps);
    const long double scale = std::pow(static_cast<long double>(samples.dt()), -static_cast<long double>(cfg.alpha));
    Grid out{samples.t0, samples.t1, samples.steps, std::vector<double>(samples.steps)};
    for (std::size_t j = 0; j < samples.steps; ++j) {
        std::size_t upto = j;
        if (cfg.window && *cfg.window < upto) {
            upto = *cfg.window;
        }
        long double acc = 0;
        for (std::size_t i = 0; i <= upto; ++i) {
            acc += w[i] * samples.values[j - i];
        }
        out.values[j] = static_cast<double>(acc * scale);
    }
    return out;
}

std::vector<std::pair<Expr, Expr>> power_terms(const Expr &e, const std::string &v)
{
    std::vector<std::pair<Expr, Expr>> out;
    for (const auto &term : terms_of(e)) {
        Expr j(0);
        std::vector<Expr> rest;
        for (const auto &f : factors_of(term)) {
            if (f.is_symbol(v)) {
                j = j + Expr(1);
            } else if (f.kind() == Kind::power && f.base().is_symbol(v) && free_of(f.exponent(), v)) {
                j = j + f.exponent();
            } else if (free_of(f, v)) {
                rest.push_back(f);
            } else {
                throw UnsupportedError("term " + term.str() + " is not a power of " + v
                                       + "; outside the separable power class, use gl_rl_derivative");
            }
        }
        out.emplace_back(mul(std::move(rest)), j);
    }
    return out;
}

double rl_power_sum(const Expr &f, const std::string &v, const Expr &alpha, const Point &point)
{
    const auto terms = power_terms(f, v);
    const double at = point.at(v);
    double sum = 0;
    for (const auto &[c, j] : terms) {
        const double d = rl_term(j, alpha, at, point);
        if (d != 0) {
            sum += eval_numeric(c, point) * d;
        }
    }
    return sum;
}

std::vector<double> pde_residual_on_grid(const PdeSpec &spec, const Expr &u,
                                         const std::vector<std::pair<double, double>> &points, const Point &params)
{
    spec.validate();
    const Expr ux = diff(u, "x");
    const Expr uxx = diff(ux, "x");
    const Bindings jets{{"u", u}, {"u_x", ux}, {"u_xx", uxx}, {"u_xxx", diff(uxx, "x")}};
    const Expr spatial = substitute(spatial_part(spec), jets);
    Expr time;
    if (spec.classical()) {
        time = diff(u, "t");
    } else {
        power_terms(u, "t"); // validates the class up front
    }
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto &[x, t] : points) {
        Point p = params;
        p["x"] = x;
        p["t"] = t;
        const double tt = spec.classical() ? eval_numeric(time, p) : rl_power_sum(u, "t", spec.alpha, p);
        out.push_back(tt + eval_numeric(spatial, p));
    }
    return out;
}

std::vector<double> fode_residual_on_grid(const Expr &reduced_ode, const Expr &h, const std::vector<double> &r_points,
                                          const Point &params, const std::string &unknown)
{
    std::vector<Expr> fds;
    find_fd(reduced_ode, fds);
    if (fds.size() != 1) {
        throw UnsupportedError("reduced ODE must contain exactly one fractional derivative, found "
                               + std::to_string(fds.size()));
    }
    const Expr fd = fds.front();
    const std::string var = fd.var();
    const Expr &operand = fd.operand();
    if (operand.kind() != Kind::function || operand.name() != unknown || operand.order() != 0
        || operand.args().size() != 1 || !operand.args()[0].is_symbol(var)) {
        throw UnsupportedError("fractional derivative must act on " + unknown + "(" + var + "), got " + fd.str());
    }
    const Expr body = instantiate(replace(reduced_ode, fd, fd_holder), unknown, var, h);
    const Expr alpha = fd.frac_order();
    power_terms(h, var);
    std::vector<double> out;
    out.reserve(r_points.size());
    for (double r : r_points) {
        Point p = params;
        p[var] = r;
        p[fd_holder.name()] = rl_power_sum(h, var, alpha, p);
        out.push_back(eval_numeric(body, p));
    }
    return out;
}

bool numerically_close(double a, double b, double rel, double abs)
{
    if (std::abs(a) > 1e-6 && std::abs(b) > 1e-6) {
        return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
    }
    return std::abs(a - b) <= abs;
}

} // namespace kmn
