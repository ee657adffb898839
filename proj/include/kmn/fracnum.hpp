#ifndef KMN_FRACNUM_HPP
#define KMN_FRACNUM_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <kmn/eval.hpp>
#include <kmn/pde.hpp>
#include <kmn/special.hpp>

namespace kmn
{

/// Samples of a function at uniform nodes t0, t0 + dt, ..., t1.
struct Grid {
    double t0 = 0;
    double t1 = 1;
    std::size_t steps = 2;
    std::vector<double> values;

    [[nodiscard]] double dt() const { return (t1 - t0) / static_cast<double>(steps - 1); }
    [[nodiscard]] double node(std::size_t i) const { return t0 + dt() * static_cast<double>(i); }
    void validate() const;

    static Grid sample(const std::function<double(double)> &f, double t0, double t1, std::size_t steps);
};

struct FracConfig {
    double alpha = 0.5;
    double history_start = 0;
    std::optional<std::size_t> window; // short-memory length in nodes
};

// w_0 = 1, w_i = w_{i-1} * (1 - (alpha+1)/i).
std::vector<long double> gl_weights(double alpha, std::size_t count);

// Grunwald-Letnikov approximation of the RL derivative at every node.
Grid gl_rl_derivative(const Grid &samples, const FracConfig &cfg);

// The terms c*v^j of a finite power sum in v (c free of v). Throws
// UnsupportedError for anything else.
std::vector<std::pair<Expr, Expr>> power_terms(const Expr &e, const std::string &v);

// RL derivative in v of a power sum by the power rule, evaluated at point.
// alpha may be symbolic when bound in point.
double rl_power_sum(const Expr &f, const std::string &v, const Expr &alpha, const Point &point);

// Residual of the PDE for a closed-form u at each (x, t). u must be a power
// sum in t with coefficients depending on x; params binds k, b and symbolic
// alpha.
std::vector<double> pde_residual_on_grid(const PdeSpec &spec, const Expr &u,
                                         const std::vector<std::pair<double, double>> &points,
                                         const Point &params = {});

// Residual of a reduced ODE in h(r) for a closed-form h (power sum in r).
std::vector<double> fode_residual_on_grid(const Expr &reduced_ode, const Expr &h, const std::vector<double> &r_points,
                                          const Point &params = {}, const std::string &unknown = "h");

// Relative tolerance when both magnitudes exceed 1e-6, absolute otherwise.
bool numerically_close(double a, double b, double rel = 1e-8, double abs = 1e-10);

} // namespace kmn

#endif
