#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <kmn/errors.hpp>
#include <kmn/fracnum.hpp>
#include <kmn/parser.hpp>
#include <kmn/reduction.hpp>
#include <kmn/special.hpp>

using namespace kmn;

namespace
{

Expr P(const std::string &s)
{
    return parse_expression(s);
}

const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);

double gl_at_one(double p, double alpha, double dt)
{
    const auto steps = static_cast<std::size_t>(std::llround(1.0 / dt)) + 1;
    const auto g = Grid::sample([p](double t) { return std::pow(t, p); }, 0.0, 1.0, steps);
    return gl_rl_derivative(g, {alpha, 0.0, std::nullopt}).values.back();
}

} // namespace

TEST_CASE("gamma function")
{
    CHECK(gamma_fn(1) == doctest::Approx(1).epsilon(1e-14));
    CHECK(gamma_fn(5) == doctest::Approx(24).epsilon(1e-14));
    // reflection: Gamma(1/2)^2 = pi
    CHECK(gamma_fn(0.5) * gamma_fn(0.5) == doctest::Approx(std::numbers::pi).epsilon(1e-13));
    CHECK(gamma_fn(0.5) == doctest::Approx(1.77245385090552).epsilon(1e-13));
    // Gamma(x)Gamma(1-x) = pi/sin(pi x) on the negative side
    for (double x : {-0.3, -1.7, -2.25}) {
        CHECK(gamma_fn(x) * gamma_fn(1 - x) == doctest::Approx(std::numbers::pi / std::sin(std::numbers::pi * x)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gamma_fn(0), DomainError);
    CHECK_THROWS_AS(gamma_fn(-3), DomainError);
}

TEST_CASE("power rule")
{
    CHECK(rl_power_rule(1.0, 0.5, 1.0) == doctest::Approx(2 * inv_sqrt_pi).epsilon(1e-13));
    CHECK(rl_power_rule(0.0, 0.5, 1.0) == doctest::Approx(inv_sqrt_pi).epsilon(1e-13));
    for (const auto &a : {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(3, 4)}) {
        for (double t : {0.3, 1.0, 2.5}) {
            CHECK(rl_power_rule(a - Rational(1), a, t) == 0.0);
        }
    }
    CHECK_THROWS_AS(rl_power_rule(-1.0, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(rl_power_rule(-1.5, 0.5, 1.0), DomainError);
    // classical limit
    for (double p : {1.0, 2.0, 3.0}) {
        CHECK(rl_power_rule(p, 1 - 1e-8, 1.0) == doctest::Approx(p).epsilon(1e-6));
    }
}

TEST_CASE("Grunwald-Letnikov against the power rule")
{
    CHECK(gl_at_one(1, 0.5, 1e-4) == doctest::Approx(2 * inv_sqrt_pi).epsilon(1e-3));
    const double t2 = std::tgamma(3.0) / std::tgamma(2.75);
    CHECK(std::abs(gl_at_one(2, 0.25, 1e-4) - t2) <= 2e-3);

    const auto zero = Grid::sample([](double) { return 0.0; }, 0.0, 1.0, 100);
    for (double v : gl_rl_derivative(zero, {}).values) {
        CHECK(v == 0.0);
    }
    CHECK_THROWS_AS(gl_rl_derivative(zero, {1.0, 0.0, std::nullopt}), DomainError);
    CHECK_THROWS_AS(gl_rl_derivative(zero, {0.0, 0.0, std::nullopt}), DomainError);
    Grid empty;
    CHECK_THROWS(gl_rl_derivative(empty, {}));
}

TEST_CASE("Grunwald-Letnikov is first order")
{
    for (double p : {1.0, 2.0, 3.0}) {
        for (double a : {0.25, 0.5, 0.75}) {
            const double exact = rl_power_rule(p, a, 1.0);
            const double e1 = std::abs(gl_at_one(p, a, 1e-3) - exact);
            const double e2 = std::abs(gl_at_one(p, a, 5e-4) - exact);
            CAPTURE(p);
            CAPTURE(a);
            CHECK(e1 / e2 >= 1.7);
            CHECK(e1 / e2 <= 2.3);
        }
    }
}

TEST_CASE("GL weights")
{
    const auto w = gl_weights(0.5, 100001);
    CHECK(w[0] == 1.0L);
    CHECK(w[1] == doctest::Approx(-0.5));
    long double s = w[0] + w[1];
    long double prev = std::abs(s);
    bool monotone = true;
    for (std::size_t i = 2; i < w.size(); ++i) {
        s += w[i];
        monotone = monotone && std::abs(s) < prev;
        prev = std::abs(s);
    }
    CHECK(monotone);
    CHECK(std::abs(static_cast<double>(s)) < 1e-2);
}

TEST_CASE("GL is linear")
{
    const auto f = Grid::sample([](double t) { return std::sin(t); }, 0.0, 2.0, 2001);
    const auto g = Grid::sample([](double t) { return t * t * t; }, 0.0, 2.0, 2001);
    Grid h = f;
    for (std::size_t i = 0; i < h.values.size(); ++i) {
        h.values[i] = 3.0 * f.values[i] + g.values[i];
    }
    const FracConfig cfg{0.4, 0.0, std::nullopt};
    const auto df = gl_rl_derivative(f, cfg);
    const auto dg = gl_rl_derivative(g, cfg);
    const auto dh = gl_rl_derivative(h, cfg);
    for (std::size_t i = 0; i < dh.values.size(); ++i) {
        CHECK(dh.values[i] == doctest::Approx(3.0 * df.values[i] + dg.values[i]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("power terms")
{
    const auto terms = power_terms(P("3*x*t^2 + t^(alpha-1)/Gamma(alpha) + 5"), "t");
    CHECK(terms.size() == 3);
    CHECK_THROWS_WITH_AS(power_terms(P("exp(t)"), "t"), doctest::Contains("gl_rl_derivative"), UnsupportedError);
}

TEST_CASE("PDE residual on a grid")
{
    PdeSpec s;
    s.alpha = Expr(Rational(1, 2));
    s.g.tag = FormTag::Constant;
    const auto r = pde_residual_on_grid(s, P("x"), {{1.0, 1.0}}, {{"k", 1.0}});
    CHECK(r.at(0) == doctest::Approx(inv_sqrt_pi + 2 + 6).epsilon(1e-12));
    const auto r2 = pde_residual_on_grid(s, P("x"), {{1.0, 1.0}}, {{"k", 0.25}});
    CHECK(r2.at(0) == doctest::Approx(inv_sqrt_pi + 2 + 1.5).epsilon(1e-12));

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> d(0.5, 2.0);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 10; ++i) {
        const double x = d(rng);
        pts.emplace_back(x, d(rng));
    }
    for (const auto &a : {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(3, 4)}) {
        PdeSpec k;
        k.alpha = Expr(a);
        k.g.tag = FormTag::Power;
        const auto kern = kernel_solution(a, Rational(3, 2));
        for (double v : pde_residual_on_grid(k, kern.h, pts, {{"k", 0.7}, {"b", 1.5}})) {
            CHECK(std::abs(v) <= 1e-15);
        }
        for (double v : pde_residual_on_grid(k, Expr(0), pts, {{"k", 0.7}, {"b", 1.5}})) {
            CHECK(v == 0.0);
        }
    }
    CHECK_THROWS_AS(pde_residual_on_grid(s, P("exp(t)*x"), {{1.0, 1.0}}, {{"k", 1.0}}), UnsupportedError);
}

TEST_CASE("reduced ODE residual on a grid")
{
    const auto &rc = reduction_case("1");
    const auto red = reduce(rc.spec, rc.generator);
    const Expr h = P("kappa*r^(alpha-1)/Gamma(alpha)");
    for (double v : fode_residual_on_grid(red.reduced_ode, h, {0.5, 1.0, 1.7}, {{"alpha", 0.5}, {"kappa", 2.0}})) {
        CHECK(std::abs(v) <= 1e-15);
    }
    for (double v : fode_residual_on_grid(red.reduced_ode, Expr(0), {0.5, 1.0}, {{"alpha", 0.5}})) {
        CHECK(v == 0.0);
    }

    // Case 2.2 at alpha = 1/4: r = t*x^4, u = x^2*h(r); at x = 1 the x^s factor is 1.
    const auto &c22 = reduction_case("2.2");
    const auto r22 = reduce(c22.spec, c22.generator);
    const Point params{{"alpha", 0.25}, {"k", 1.0}};
    const double fode = fode_residual_on_grid(r22.reduced_ode, P("r"), {1.0}, params).at(0);
    const double scale = eval_numeric(r22.scale, params);
    PdeSpec s = c22.spec;
    s.alpha = Expr(Rational(1, 4));
    const double pde = pde_residual_on_grid(s, P("x^2*t*x^4"), {{1.0, 1.0}}, {{"k", 1.0}}).at(0);
    CHECK(fode / scale == doctest::Approx(pde).epsilon(1e-12));
}

TEST_CASE("numeric closeness")
{
    CHECK(numerically_close(1.0, 1.0 + 1e-10));
    CHECK_FALSE(numerically_close(1.0, 1.0 + 1e-6));
    CHECK(numerically_close(1e-12, -1e-12));
    CHECK_FALSE(numerically_close(1e-7, 5e-7));
}
