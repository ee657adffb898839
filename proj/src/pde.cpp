#include <kmn/pde.hpp>

#include <kmn/errors.hpp>
#include <kmn/poly.hpp>

namespace kmn
{

namespace
{

const Expr t_sym = sym("t");
const Expr x_sym = sym("x");
const Expr u_sym = sym("u");

bool free_of_coordinates(const Expr &e)
{
    return free_of(e, "t") && free_of(e, "x") && free_of(e, "u");
}

} // namespace

std::string to_string(FormTag tag)
{
    switch (tag) {
        case FormTag::Arbitrary:
            return "arbitrary";
        case FormTag::Constant:
            return "constant";
        case FormTag::Power:
            return "power";
        case FormTag::Exponential:
            return "exponential";
        case FormTag::ShiftedPower23:
            return "shifted-power-2/3";
        case FormTag::QuadPower13:
            return "quadratic-power-1/3";
    }
    return "?";
}

Expr CoeffForm::at(const Expr &t) const
{
    switch (tag) {
        case FormTag::Arbitrary:
            return func("g", {t});
        case FormTag::Constant:
            return k;
        case FormTag::Power:
            return k * pow(t, b);
        case FormTag::Exponential:
            return k * func("exp", {b * t});
        case FormTag::ShiftedPower23:
            return k * pow(t - b, Expr(Rational(2, 3)));
        case FormTag::QuadPower13:
            return k * pow(t * t - b, Expr(Rational(1, 3)));
    }
    return k;
}

std::optional<CoeffForm> recognize_form(const Expr &g)
{
    if (g == func("g", {t_sym})) {
        return CoeffForm{FormTag::Arbitrary, sym("k"), sym("b")};
    }
    if (g.kind() == Kind::sum && !free_of(g, "t")) {
        return std::nullopt;
    }
    std::vector<Expr> coeff;
    std::vector<Expr> tpart;
    for (const auto &f : factors_of(g)) {
        (free_of(f, "t") ? coeff : tpart).push_back(f);
    }
    const Expr k = mul(coeff);
    if (tpart.empty()) {
        return CoeffForm{FormTag::Constant, k, sym("b")};
    }
    if (tpart.size() != 1) {
        return std::nullopt;
    }
    const Expr &f = tpart.front();
    if (f == t_sym) {
        return CoeffForm{FormTag::Power, k, Expr(1)};
    }
    if (f.kind() == Kind::power && f.base() == t_sym && free_of(f.exponent(), "t")) {
        return CoeffForm{FormTag::Power, k, f.exponent()};
    }
    if (f.kind() == Kind::function && f.name() == "exp" && f.order() == 0) {
        const Expr &a = f.args()[0];
        const Expr b = diff(a, "t");
        if (free_of(b, "t") && (a - b * t_sym).is_zero()) {
            return CoeffForm{FormTag::Exponential, k, b};
        }
        return std::nullopt;
    }
    if (f.kind() == Kind::power && f.exponent() == Expr(Rational(2, 3))) {
        const Expr rest = f.base() - t_sym;
        if (free_of(rest, "t")) {
            return CoeffForm{FormTag::ShiftedPower23, k, -rest};
        }
    }
    if (f.kind() == Kind::power && f.exponent() == Expr(Rational(1, 3))) {
        const Expr rest = f.base() - t_sym * t_sym;
        if (free_of(rest, "t")) {
            return CoeffForm{FormTag::QuadPower13, k, -rest};
        }
    }
    return std::nullopt;
}

void PdeSpec::validate() const
{
    if (m < 1 || m > 6 || n < 1 || n > 6) {
        throw DomainError("m and n must be integers in 1..6");
    }
    if (zeta != 1 && zeta != -1) {
        throw DomainError("zeta must be +1 or -1");
    }
    if (!free_of_coordinates(alpha)) {
        throw DomainError("alpha must not depend on t, x or u");
    }
    if (alpha.is_number() && (alpha.value().sign() <= 0 || alpha.value() > Rational(1))) {
        throw DomainError("alpha must lie in (0, 1], got " + alpha.str());
    }
    if (g.tag != FormTag::Arbitrary && g.k.is_zero()) {
        throw DomainError("coefficient k must be nonzero");
    }
}

const JetContext &kmn_jets()
{
    static const JetContext ctx({"x", "t"}, "u", 3);
    return ctx;
}

Expr time_term(const PdeSpec &spec)
{
    if (spec.classical()) {
        return kmn_jets().jet("t");
    }
    return fdiff(u_sym, "t", spec.alpha);
}

Expr spatial_part(const PdeSpec &spec)
{
    const auto &ctx = kmn_jets();
    return Expr(spec.zeta) * total_derivative(pow(u_sym, Expr(spec.m)), "x", ctx)
           + spec.g.at(t_sym) * total_derivative(pow(u_sym, Expr(spec.n)), "x", 3, ctx);
}

Expr pde_residual(const PdeSpec &spec)
{
    spec.validate();
    return time_term(spec) + spatial_part(spec);
}

std::vector<Expr> term_weights(const PdeSpec &spec, const ScalingWeights &w)
{
    if (!spec.g.weight_homogeneous()) {
        throw UnsupportedError("g form " + to_string(spec.g.tag) + " is not weight-homogeneous");
    }
    const Expr gw = spec.g.tag == FormTag::Power ? spec.g.b * w.w_t : Expr(0);
    return {
        w.w_u - spec.alpha * w.w_t,
        Expr(spec.m) * w.w_u - w.w_x,
        gw + Expr(spec.n) * w.w_u - Expr(3) * w.w_x,
    };
}

bool scaling_invariance_check(const PdeSpec &spec, const ScalingWeights &w)
{
    const auto ws = term_weights(spec, w);
    for (std::size_t i = 1; i < ws.size(); ++i) {
        if (!rational_equal(ws[i], ws[0])) {
            return false;
        }
    }
    return true;
}

Generator Generator::from_normal(const NormalForm &nf)
{
    return {nf.e * t_sym, nf.a0 + nf.a1 * x_sym, nf.c * u_sym};
}

std::optional<NormalForm> Generator::normal_form() const
{
    NormalForm nf;
    nf.e = diff(xi_t, "t");
    nf.a1 = diff(xi_x, "x");
    nf.a0 = xi_x - nf.a1 * x_sym;
    nf.c = diff(eta, "u");
    for (const auto *p : {&nf.e, &nf.a0, &nf.a1, &nf.c}) {
        if (!free_of_coordinates(*p)) {
            return std::nullopt;
        }
    }
    if (!(xi_t - nf.e * t_sym).is_zero() || !(eta - nf.c * u_sym).is_zero()) {
        return std::nullopt;
    }
    return nf;
}

std::string Generator::str() const
{
    return "xi_t = " + xi_t.str() + ", xi_x = " + xi_x.str() + ", eta = " + eta.str();
}

bool proportional(const Generator &a, const Generator &b)
{
    if (a.is_zero() || b.is_zero()) {
        return false;
    }
    const Expr va[3] = {a.xi_t, a.xi_x, a.eta};
    const Expr vb[3] = {b.xi_t, b.xi_x, b.eta};
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (!rational_equal(va[i] * vb[j], va[j] * vb[i])) {
                return false;
            }
        }
        // Components must vanish together.
        if (va[i].is_zero() != vb[i].is_zero()) {
            return false;
        }
    }
    // The ratio must be free of the coordinates.
    for (int i = 0; i < 3; ++i) {
        if (!va[i].is_zero()) {
            const RatFunc ratio = RatFunc::from_expr(va[i]) / RatFunc::from_expr(vb[i]);
            if (!free_of_coordinates(ratio.num().to_expr()) || !free_of_coordinates(ratio.den().to_expr())) {
                return false;
            }
            break;
        }
    }
    return true;
}

} // namespace kmn
