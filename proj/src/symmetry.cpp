#include <kmn/symmetry.hpp>

#include <kmn/calculus.hpp>
#include <kmn/errors.hpp>

namespace kmn
{

namespace
{

const Expr t_sym = sym("t");
const Expr u_sym = sym("u");

bool is_coordinate_atom(const Expr &a)
{
    if (!free_of(a, "t") || !free_of(a, "x")) {
        return true;
    }
    for (const auto &s : free_symbols(a)) {
        if (kmn_jets().is_jet(s)) {
            return true;
        }
    }
    return false;
}

bool has_fd(const Expr &e)
{
    if (e.kind() == Kind::frac_derivative) {
        return true;
    }
    for (const auto &a : e.args()) {
        if (has_fd(a)) {
            return true;
        }
    }
    return false;
}

bool is_special_form(FormTag tag)
{
    return tag == FormTag::ShiftedPower23 || tag == FormTag::QuadPower13;
}

} // namespace

Expr binomial_alpha(const Expr &alpha, int m)
{
    Expr r(1);
    Rational fact(1);
    for (int j = 0; j < m; ++j) {
        r = r * (alpha - Expr(j));
        fact *= Rational(j + 1);
    }
    return r * Expr(fact.inverse());
}

std::array<Expr, 3> integer_prolongations(const Generator &gen, const JetContext &ctx)
{
    const Expr dxi_x = total_derivative(gen.xi_x, "x", ctx);
    const Expr dxi_t = total_derivative(gen.xi_t, "x", ctx);
    std::array<Expr, 3> out;
    Expr prev = gen.eta;
    std::string letters;
    for (int k = 0; k < 3; ++k) {
        letters += "x";
        prev = total_derivative(prev, "x", ctx) - ctx.jet(letters) * dxi_x - ctx.jet(letters.substr(1) + "t") * dxi_t;
        out[static_cast<std::size_t>(k)] = prev;
    }
    return out;
}

ProlongationResult eta_alpha(const Generator &gen, const Expr &alpha, int M)
{
    if (M < 1) {
        throw DomainError("series truncation must be at least 1");
    }
    const auto &ctx = kmn_jets();
    ProlongationResult r;
    r.truncation = M;
    const Expr eta_u = diff(gen.eta, "u");
    const Expr dt_xi_t = total_derivative(gen.xi_t, "t", ctx);
    r.fd_coefficient = eta_u - alpha * dt_xi_t;

    Expr explicit_part;
    try {
        explicit_part = rl_power_expr(gen.eta, "t", alpha) - u_sym * rl_power_expr(eta_u, "t", alpha);
    } catch (const UnsupportedError &e) {
        throw UnsupportedError(std::string("unsupported ansatz: eta must be polynomial in t (") + e.what() + ")");
    }

    std::vector<Expr> parts{explicit_part, r.fd_coefficient * fdiff(u_sym, "t", alpha)};
    const Expr ux = ctx.jet("x");
    for (int m = 1; m <= M; ++m) {
        const Expr cu = binomial_alpha(alpha, m) * diff(eta_u, "t", m)
                        - binomial_alpha(alpha, m + 1) * total_derivative(gen.xi_t, "t", m + 1, ctx);
        const Expr cux = -binomial_alpha(alpha, m) * total_derivative(gen.xi_x, "t", m, ctx);
        if (!cu.is_zero()) {
            r.series.push_back({m, u_sym, cu});
            parts.push_back(cu * fdiff(u_sym, "t", alpha - Expr(m)));
        }
        if (!cux.is_zero()) {
            r.series.push_back({m, ux, cux});
            parts.push_back(cux * fdiff(ux, "t", alpha - Expr(m)));
        }
    }
    r.eta_alpha = add(std::move(parts));
    const auto ip = integer_prolongations(gen, ctx);
    r.eta_x = ip[0];
    r.eta_xx = ip[1];
    r.eta_xxx = ip[2];
    return r;
}

bool vanishes_identically(const Expr &e)
{
    if (e.is_zero()) {
        return true;
    }
    for (const auto &[mono, coeff] : collect_by(e, is_coordinate_atom)) {
        if (!RatFunc::from_expr(coeff).is_zero()) {
            return false;
        }
    }
    return true;
}

InvarianceResult invariance_residual(const PdeSpec &spec, const Generator &gen, int M)
{
    spec.validate();
    const auto &ctx = kmn_jets();
    const Expr time = time_term(spec);
    const Expr holder = sym("__Dalpha");
    const Expr R = replace(pde_residual(spec), time, holder);
    const auto pr = eta_alpha(gen, spec.alpha, M);

    Expr eta_time = pr.eta_alpha;
    if (spec.classical()) {
        eta_time = replace(eta_time, fdiff(u_sym, "t", Expr(1)), ctx.jet("t"));
    }

    std::vector<Expr> parts{
        gen.xi_t * diff(R, "t"),
        gen.xi_x * diff(R, "x"),
        gen.eta * diff(R, "u"),
        pr.eta_x * diff(R, "u_x"),
        pr.eta_xx * diff(R, "u_xx"),
        pr.eta_xxx * diff(R, "u_xxx"),
        eta_time * diff(R, holder.name()),
    };
    const Expr on_solution = -spatial_part(spec);
    Expr res = replace(add(std::move(parts)), time, on_solution);
    res = substitute(res, {{holder.name(), on_solution}});

    InvarianceResult out;
    out.residual = res;
    for (const auto &term : terms_of(res)) {
        if (has_fd(term)) {
            out.obstructions.push_back(term);
        }
    }
    out.is_symmetry = out.obstructions.empty() && vanishes_identically(res);
    return out;
}

DeterminingSystem determining_system(const PdeSpec &spec, int M)
{
    DeterminingSystem sys;
    // e last, so that elimination leaves it free and scaling generators come
    // out with a nonzero t-component.
    sys.unknowns = {"a0", "a1", "c", "e"};
    const NormalForm nf{sym("e"), sym("a0"), sym("a1"), sym("c")};
    const auto inv = invariance_residual(spec, Generator::from_normal(nf), M);
    for (const auto &[mono, coeff] : collect_by(inv.residual, is_coordinate_atom)) {
        std::vector<Expr> row;
        Expr rebuilt;
        for (const auto &name : sys.unknowns) {
            const Expr d = diff(coeff, name);
            for (const auto &other : sys.unknowns) {
                if (!free_of(d, other)) {
                    throw UnsupportedError("determining equation is not linear in the ansatz: " + coeff.str());
                }
            }
            row.push_back(d);
            rebuilt = rebuilt + d * sym(name);
        }
        if (!(coeff - rebuilt).is_zero()) {
            throw UnsupportedError("determining equation is not homogeneous in the ansatz: " + coeff.str());
        }
        std::vector<RatFunc> rrow;
        for (const auto &d : row) {
            rrow.push_back(RatFunc::from_expr(d));
        }
        sys.monomials.push_back(mono);
        sys.equations.push_back(coeff);
        sys.matrix.push_back(std::move(rrow));
    }
    return sys;
}

std::optional<std::string> theorem_case(const PdeSpec &spec)
{
    if (spec.m != 2 || spec.n != 3 || spec.zeta != 1) {
        return std::nullopt;
    }
    const auto tag = spec.g.tag;
    if (!spec.alpha.is_number()) {
        switch (tag) {
            case FormTag::Arbitrary:
                return "1.1";
            case FormTag::Power:
                return "1.2";
            case FormTag::Constant:
                return "1.3";
            default:
                return std::nullopt;
        }
    }
    const auto &a = spec.alpha.value();
    if (a == Rational(1, 2)) {
        switch (tag) {
            case FormTag::Exponential:
                return "2.1";
            case FormTag::Power:
                return "2.2";
            case FormTag::Constant:
                return "2.3";
            default:
                return std::nullopt;
        }
    }
    if (a == Rational(1, 3)) {
        switch (tag) {
            case FormTag::ShiftedPower23:
            case FormTag::QuadPower13:
            case FormTag::Exponential:
                return "3.1";
            case FormTag::Power:
                return "3.2";
            case FormTag::Constant:
                return "3.3";
            default:
                return std::nullopt;
        }
    }
    return std::nullopt;
}

Classification classify(const PdeSpec &spec, int M)
{
    spec.validate();
    Classification out;
    out.case_key = theorem_case(spec);
    const NormalForm translation{Expr(0), Expr(1), Expr(0), Expr(0)};

    if (is_special_form(spec.g.tag)) {
        if (spec.alpha != Expr(Rational(1, 3))) {
            throw UnsupportedError("g form " + to_string(spec.g.tag) + " with alpha = " + spec.alpha.str()
                                   + " is outside catalog");
        }
        const Generator g = Generator::from_normal(translation);
        if (!invariance_residual(spec, g, M).is_symmetry) {
            throw UnsupportedError("translation check failed for " + to_string(spec.g.tag));
        }
        out.generators.push_back(g);
        out.normal_forms.push_back(translation);
        out.verified_only = true;
        return out;
    }

    const auto sys = determining_system(spec, M);
    const auto basis = nullspace(sys.matrix, sys.unknowns.size());
    std::vector<NormalForm> forms;
    for (auto v : basis) {
        // v is ordered (a0, a1, c, e)
        RatFunc scale(Rational(1));
        if (!v[3].is_zero()) {
            scale = RatFunc(Rational(-1)) / v[3];
        } else if (!v[1].is_zero()) {
            scale = RatFunc(Rational(1)) / v[1];
        } else if (!v[0].is_zero()) {
            scale = RatFunc(Rational(1)) / v[0];
        } else if (!v[2].is_zero()) {
            scale = RatFunc(Rational(1)) / v[2];
        }
        for (auto &x : v) {
            x *= scale;
        }
        forms.push_back({v[3].to_expr(), v[0].to_expr(), v[1].to_expr(), v[2].to_expr()});
    }
    std::stable_sort(forms.begin(), forms.end(), [](const NormalForm &a, const NormalForm &b) {
        const bool ta = a.e.is_zero() && a.a1.is_zero() && a.c.is_zero();
        const bool tb = b.e.is_zero() && b.a1.is_zero() && b.c.is_zero();
        return ta && !tb;
    });
    for (const auto &nf : forms) {
        out.normal_forms.push_back(nf);
        out.generators.push_back(Generator::from_normal(nf));
    }
    return out;
}

} // namespace kmn
