#include <kmn/reduction.hpp>

#include <algorithm>
#include <cmath>

#include <kmn/errors.hpp>
#include <kmn/fracnum.hpp>
#include <kmn/poly.hpp>

namespace kmn
{

namespace
{

const Expr x_sym = sym("x");
const Expr t_sym = sym("t");
const Expr r_sym = sym("r");

Expr h_of_r()
{
    return func("h", {r_sym});
}

Rational constant_of(const RatFunc &f)
{
    return f.num().constant_value() / f.den().constant_value();
}

Expr only_fd(const Expr &e)
{
    std::vector<Expr> stack{e};
    std::optional<Expr> found;
    while (!stack.empty()) {
        const Expr cur = stack.back();
        stack.pop_back();
        if (cur.kind() == Kind::frac_derivative) {
            if (found && !(*found == cur)) {
                throw UnsupportedError("reduced ODE has more than one fractional derivative");
            }
            found = cur;
            continue;
        }
        for (const auto &a : cur.args()) {
            stack.push_back(a);
        }
    }
    if (!found) {
        throw UnsupportedError("reduced ODE has no fractional derivative: " + e.str());
    }
    return *found;
}

bool depends_on_r(const Expr &a)
{
    return !free_of(a, "r");
}

std::map<Expr, RatFunc> normalized_coefficients(const Expr &e)
{
    const Expr fd = only_fd(e);
    const RatFunc lead = RatFunc::from_expr(fd_coefficient(e));
    if (lead.is_zero()) {
        throw UnsupportedError("fractional derivative coefficient vanishes");
    }
    std::map<Expr, RatFunc> out;
    for (const auto &[mono, coeff] : collect_by(e, depends_on_r)) {
        const RatFunc c = RatFunc::from_expr(coeff) / lead;
        if (!c.is_zero()) {
            out.emplace(mono, c);
        }
    }
    return out;
}

// Splits a term into its x-exponent and the x-free rest.
std::pair<Expr, Expr> split_x(const Expr &term)
{
    Expr s(0);
    std::vector<Expr> rest;
    for (const auto &f : factors_of(term)) {
        if (f.is_symbol("x")) {
            s = s + Expr(1);
        } else if (f.kind() == Kind::power && f.base().is_symbol("x") && free_of(f.exponent(), "x")) {
            s = s + f.exponent();
        } else {
            rest.push_back(f);
        }
    }
    Expr r = mul(std::move(rest));
    if (!free_of(r, "x")) {
        throw UnsupportedError("term mixes x and r irreducibly: " + term.str());
    }
    return {s, r};
}

} // namespace

Expr SimilarityReduction::r_invariant() const
{
    return t_sym * pow(x_sym, q);
}

Expr SimilarityReduction::z_invariant() const
{
    return sym("u") * pow(x_sym, -p);
}

SimilarityReduction characteristic_invariants(const Generator &gen)
{
    const auto nf = gen.normal_form();
    if (!nf) {
        throw UnsupportedError("generator is not of translation/scaling form: " + gen.str());
    }
    SimilarityReduction red;
    const bool scaling = !(nf->e.is_zero() && nf->a1.is_zero() && nf->c.is_zero());
    if (!scaling) {
        if (nf->a0.is_zero()) {
            throw UnsupportedError("zero generator has no invariants");
        }
        red.p = Expr(0);
        red.q = Expr(0);
        red.translation_case = true;
        return red;
    }
    if (!nf->a0.is_zero()) {
        throw UnsupportedError("x-translation mixed with scaling is not supported: " + gen.str());
    }
    const RatFunc a1 = RatFunc::from_expr(nf->a1);
    if (a1.is_zero()) {
        throw UnsupportedError("generator does not scale x: " + gen.str());
    }
    red.q = (RatFunc::from_expr(-nf->e) / a1).to_expr();
    red.p = (RatFunc::from_expr(nf->c) / a1).to_expr();
    if (red.q.is_zero()) {
        throw UnsupportedError("generator does not scale t: " + gen.str());
    }
    return red;
}

SimilarityReduction similarity_substitute(const PdeSpec &spec, SimilarityReduction red)
{
    spec.validate();
    const Expr H = h_of_r();
    const Expr xq = pow(x_sym, red.q);
    const Expr rx = r_sym * pow(x_sym, -Expr(1));
    const auto Dx = [&](const Expr &f) { return diff(f, "x") + red.q * rx * diff(f, "r"); };

    const Expr U = pow(x_sym, red.p) * H;
    Expr time;
    if (spec.classical()) {
        time = pow(x_sym, red.p + red.q) * func("h", {r_sym}, 1);
    } else {
        time = pow(x_sym, red.p + red.q * spec.alpha) * fdiff(H, "r", spec.alpha);
    }
    const Expr convect = Expr(spec.zeta) * Dx(pow(U, Expr(spec.m)));
    const Expr dispersion = spec.g.at(r_sym * pow(xq, -Expr(1))) * Dx(Dx(Dx(pow(U, Expr(spec.n)))));
    const Expr total = time + convect + dispersion;

    std::vector<std::pair<Expr, std::vector<Expr>>> groups;
    for (const auto &term : terms_of(total)) {
        auto [s, rest] = split_x(term);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto &g) { return rational_equal(g.first, s); });
        if (it == groups.end()) {
            groups.push_back({s, {rest}});
        } else {
            it->second.push_back(rest);
        }
    }
    if (groups.size() != 1) {
        std::string msg = "residual does not factor as a single power of x; exponents:";
        for (const auto &g : groups) {
            msg += " [" + g.first.str() + ": " + add(g.second).str() + "]";
        }
        throw UnsupportedError(msg);
    }
    red.s = RatFunc::from_expr(groups.front().first).to_expr();
    const Expr raw = add(groups.front().second);

    const auto coeffs = collect_by(raw, depends_on_r);
    std::vector<std::pair<Expr, RatFunc>> rc;
    for (const auto &[mono, c] : coeffs) {
        rc.emplace_back(mono, RatFunc::from_expr(c));
    }
    // Denominators come from q; the smallest power of its denominator that
    // clears every coefficient is the scale.
    const Poly base = RatFunc::from_expr(red.q).den();
    std::optional<RatFunc> scale;
    Poly power(Rational(1));
    for (int k = 0; k <= 8 && !scale; ++k, power *= base) {
        const bool clears = std::all_of(rc.begin(), rc.end(), [&](const auto &mc) {
            return (mc.second * RatFunc(power, Poly(Rational(1)))).is_polynomial()
                   || (mc.second.num() * power).divide_exact(mc.second.den()).has_value();
        });
        if (clears) {
            scale = RatFunc(power, Poly(Rational(1)));
        }
    }
    if (!scale) {
        throw UnsupportedError("reduced coefficients have denominators not cleared by powers of " + base.to_expr().str());
    }
    std::vector<Expr> parts;
    for (const auto &[mono, c] : rc) {
        const RatFunc cs = c * *scale;
        const auto exact = cs.num().divide_exact(cs.den());
        parts.push_back((exact ? exact->to_expr() : cs.to_expr()) * mono);
    }
    red.scale = scale->to_expr();
    red.reduced_ode = add(std::move(parts));
    return red;
}

SimilarityReduction reduce(const PdeSpec &spec, const Generator &gen)
{
    return similarity_substitute(spec, characteristic_invariants(gen));
}

Expr fd_coefficient(const Expr &reduced_ode)
{
    const Expr fd = only_fd(reduced_ode);
    const Expr holder = sym("__fdcoef");
    return diff(replace(reduced_ode, fd, holder), holder.name());
}

bool normalize_fd_coefficient(SimilarityReduction &red, const Expr &target)
{
    const RatFunc ratio = RatFunc::from_expr(target) / RatFunc::from_expr(fd_coefficient(red.reduced_ode));
    if (!ratio.is_constant() || ratio.is_zero()) {
        return false;
    }
    const Expr c(constant_of(ratio));
    red.reduced_ode = c * red.reduced_ode;
    red.scale = c * red.scale;
    return true;
}

Expr rename_unknown(const Expr &e, const std::string &from, const std::string &to)
{
    if (e.args().empty()) {
        return e;
    }
    std::vector<Expr> args;
    for (const auto &a : e.args()) {
        args.push_back(rename_unknown(a, from, to));
    }
    if (e.kind() == Kind::function && e.name() == from) {
        return func(to, std::move(args), e.order());
    }
    return with_args(e, std::move(args));
}

ComparisonReport compare_reduced_forms(const Expr &derived, const Expr &printed)
{
    const auto d = normalized_coefficients(derived);
    const auto p = normalized_coefficients(printed);
    std::set<Expr> monos;
    for (const auto &[m, c] : d) {
        monos.insert(m);
    }
    for (const auto &[m, c] : p) {
        monos.insert(m);
    }
    ComparisonReport rep;
    for (const auto &m : monos) {
        CoefficientEntry e;
        e.monomial = m;
        const auto di = d.find(m);
        const auto pi = p.find(m);
        const RatFunc dc = di == d.end() ? RatFunc() : di->second;
        const RatFunc pc = pi == p.end() ? RatFunc() : pi->second;
        e.derived = dc.to_expr();
        e.printed = pc.to_expr();
        e.equal = dc == pc;
        rep.entries.push_back(e);
        if (!e.equal) {
            rep.mismatches.push_back(e);
        }
    }
    rep.equal = rep.mismatches.empty();
    return rep;
}

double reduced_residual_identity_check(const PdeSpec &spec, const SimilarityReduction &red, const Expr &h_test,
                                       const std::vector<std::pair<double, double>> &points, const Bindings &values)
{
    const auto bind = [&](const Expr &e) { return values.empty() ? e : substitute(e, values); };
    PdeSpec s = spec;
    s.alpha = bind(spec.alpha);
    s.g.k = bind(spec.g.k);
    s.g.b = bind(spec.g.b);
    const Expr p = bind(red.p);
    const Expr q = bind(red.q);
    const Expr sx = bind(red.s);
    const Expr scale = bind(red.scale);
    const Expr ode = bind(red.reduced_ode);

    const Expr U = pow(x_sym, p) * substitute(h_test, {{"r", t_sym * pow(x_sym, q)}});
    const auto lhs = pde_residual_on_grid(s, U, points);
    const double scale_v = eval_numeric(scale, {});
    double worst = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [x, t] = points[i];
        const Point xp{{"x", x}};
        const double r = t * eval_numeric(pow(x_sym, q), xp);
        const double reduced = fode_residual_on_grid(ode, h_test, {r}).front();
        const double rhs = eval_numeric(pow(x_sym, sx), xp) * reduced / scale_v;
        const double mag = std::max(std::abs(lhs[i]), std::abs(rhs));
        const double dev = mag > 1e-6 ? std::abs(lhs[i] - rhs) / mag : std::abs(lhs[i] - rhs);
        worst = std::max(worst, dev);
    }
    return worst;
}

KernelSolution kernel_solution(const Rational &alpha, const Rational &kappa)
{
    if (alpha == Rational(1)) {
        throw DomainError("alpha = 1: the derivative is classical and the kernel is the constant solution h = kappa");
    }
    if (!(alpha > Rational(0) && alpha < Rational(1))) {
        throw DomainError("kernel solution requires 0 < alpha < 1, got " + alpha.to_string());
    }
    return kernel_solution(Expr(alpha), Expr(kappa));
}

KernelSolution kernel_solution(const Expr &alpha, const Expr &kappa)
{
    if (alpha.is_one()) {
        throw DomainError("alpha = 1: the derivative is classical and the kernel is the constant solution h = kappa");
    }
    KernelSolution k;
    k.h = kappa * pow(t_sym, alpha - Expr(1)) * pow(gamma(alpha), Expr(-1));
    k.residual = rl_power_expr(k.h, "t", alpha);
    return k;
}

const std::vector<ReductionCase> &reduction_cases()
{
    static const std::vector<ReductionCase> cases = [] {
        const Expr alpha = sym(alpha_name);
        const Expr b = sym("b");
        const Expr t = t_sym;
        const Expr x = x_sym;
        const Expr u = sym("u");
        const Expr half(Rational(1, 2));
        const Expr third(Rational(1, 3));
        const Bindings vals{{"k", Expr(Rational(2, 3))}, {"b", Expr(Rational(3, 2))}};

        CoeffForm arbitrary{FormTag::Arbitrary};
        CoeffForm power{FormTag::Power};
        CoeffForm constant{FormTag::Constant};
        const auto spec = [](Expr a, CoeffForm g) {
            PdeSpec s;
            s.alpha = std::move(a);
            s.g = std::move(g);
            return s;
        };
        std::vector<ReductionCase> v;
        v.push_back({"1", spec(alpha, arbitrary), {Expr(0), Expr(1), Expr(0)}, Rational(1, 4), vals});
        v.push_back({"2.1", spec(alpha, power), {-t, (alpha - b) * x, (Expr(2) * alpha - b) * u}, Rational(1, 4), vals});
        v.push_back({"2.2", spec(alpha, constant), {-t, alpha * x, Expr(2) * alpha * u}, Rational(1, 4), vals});
        v.push_back({"3.1", spec(half, power),
                     {Expr(2) * t, (Expr(2) * b - Expr(1)) * x, Expr(2) * (b - Expr(1)) * u}, Rational(1, 2), vals});
        v.push_back({"3.2", spec(half, constant), {Expr(-2) * t, x, Expr(2) * u}, Rational(1, 2), vals});
        v.push_back({"4.1", spec(third, power),
                     {Expr(3) * t, (Expr(3) * b - Expr(1)) * x, (Expr(3) * b - Expr(2)) * u}, Rational(1, 3), vals});
        v.push_back({"4.2", spec(third, constant), {Expr(-3) * t, x, Expr(2) * u}, Rational(1, 3), vals});
        return v;
    }();
    return cases;
}

const ReductionCase &reduction_case(const std::string &key)
{
    for (const auto &c : reduction_cases()) {
        if (c.key == key) {
            return c;
        }
    }
    throw UnsupportedError("unknown reduction case " + key);
}

} // namespace kmn
