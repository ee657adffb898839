#include <doctest.h>

#include <random>

#include <kmn/errors.hpp>
#include <kmn/parser.hpp>
#include <kmn/symmetry.hpp>

using namespace kmn;

namespace
{

Expr P(const std::string &s)
{
    return parse_expression(s);
}

PdeSpec make(const Expr &alpha, FormTag tag)
{
    PdeSpec s;
    s.alpha = alpha;
    s.g.tag = tag;
    return s;
}

// Scaling generators of the classification table, for every spec that has one.
std::vector<std::pair<PdeSpec, Generator>> scaling_cases()
{
    const Expr half(Rational(1, 2));
    const Expr third(Rational(1, 3));
    return {
        {make(sym("alpha"), FormTag::Power), {P("-t"), P("(alpha-b)*x"), P("(2*alpha-b)*u")}},
        {make(sym("alpha"), FormTag::Constant), {P("-t"), P("alpha*x"), P("2*alpha*u")}},
        {make(half, FormTag::Power), {P("2*t"), P("(2*b-1)*x"), P("2*(b-1)*u")}},
        {make(half, FormTag::Constant), {P("-2*t"), P("x"), P("2*u")}},
        {make(third, FormTag::Power), {P("3*t"), P("(3*b-1)*x"), P("(3*b-2)*u")}},
        {make(third, FormTag::Constant), {P("-3*t"), P("x"), P("2*u")}},
    };
}

} // namespace

TEST_CASE("generalized binomial")
{
    CHECK(binomial_alpha(P("alpha"), 2) == P("alpha*(alpha-1)/2"));
    CHECK(binomial_alpha(Expr(Rational(1, 2)), 3) == Expr(Rational(1, 16)));
}

TEST_CASE("fractional prolongation cancels for affine generators")
{
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    for (int i = 0; i < 20; ++i) {
        const Expr c(Rational(num(rng), den(rng)));
        const Expr e(Rational(num(rng), den(rng)));
        const Expr a1(Rational(num(rng), den(rng)));
        const Expr alpha(Rational(den(rng), 10));
        CAPTURE(c);
        CAPTURE(alpha);
        const Generator g = Generator::from_normal({e, Expr(0), a1, c});
        const auto pr = eta_alpha(g, alpha, 5);
        // D_t^{m+1}(e t) vanishes for m >= 1 and eta_u is constant, so only
        // the leading term survives.
        CHECK(pr.series.empty());
        CHECK(pr.eta_alpha == (c - alpha * e) * fdiff(sym("u"), "t", alpha));
    }
}

TEST_CASE("truncation does not change the residual of affine generators")
{
    for (const auto &[spec, gen] : scaling_cases()) {
        CHECK(invariance_residual(spec, gen, 1).residual == invariance_residual(spec, gen, 8).residual);
    }
    const Generator bad{P("-t"), P("x"), P("u")};
    const auto spec = make(sym("alpha"), FormTag::Constant);
    CHECK(invariance_residual(spec, bad, 1).residual == invariance_residual(spec, bad, 8).residual);
}

TEST_CASE("truncated series survives for a t-dependent generator")
{
    const Generator g{P("t^2"), P("0"), P("t*u")};
    const auto pr = eta_alpha(g, sym("alpha"), 5);
    CHECK_FALSE(pr.series.empty());
    const auto inv = invariance_residual(make(sym("alpha"), FormTag::Constant), g, 5);
    CHECK_FALSE(inv.obstructions.empty());
    CHECK_FALSE(inv.is_symmetry);
}

TEST_CASE("x-translation is a symmetry of every catalog spec")
{
    std::mt19937_64 rng(777);
    const std::vector<FormTag> tags{FormTag::Arbitrary, FormTag::Constant, FormTag::Power, FormTag::Exponential};
    const std::vector<Expr> alphas{sym("alpha"), Expr(Rational(1, 2)), Expr(Rational(1, 3)), Expr(Rational(3, 4)),
                                   Expr(1)};
    std::uniform_int_distribution<int> pick_tag(0, 3);
    std::uniform_int_distribution<int> pick_alpha(0, 4);
    std::uniform_int_distribution<int> pick_mn(1, 6);
    std::uniform_int_distribution<int> pick_zeta(0, 1);
    const Generator dx{Expr(0), Expr(1), Expr(0)};
    for (int i = 0; i < 50; ++i) {
        PdeSpec s;
        s.alpha = alphas[static_cast<std::size_t>(pick_alpha(rng))];
        s.g.tag = tags[static_cast<std::size_t>(pick_tag(rng))];
        s.m = pick_mn(rng);
        s.n = pick_mn(rng);
        s.zeta = pick_zeta(rng) ? 1 : -1;
        CAPTURE(i);
        CHECK(invariance_residual(s, dx).is_symmetry);
    }
    for (auto tag : {FormTag::ShiftedPower23, FormTag::QuadPower13}) {
        CHECK(invariance_residual(make(Expr(Rational(1, 3)), tag), dx).is_symmetry);
    }
}

TEST_CASE("scaling generators are weight-homogeneous")
{
    for (const auto &[spec, gen] : scaling_cases()) {
        const auto nf = gen.normal_form();
        REQUIRE(nf);
        CHECK(scaling_invariance_check(spec, {nf->e, nf->a1, nf->c}));
        CHECK(invariance_residual(spec, gen).is_symmetry);
    }
}

TEST_CASE("perturbed generators are not symmetries")
{
    for (const auto &[spec, gen] : scaling_cases()) {
        const auto nf = *gen.normal_form();
        for (int which = 0; which < 3; ++which) {
            NormalForm p = nf;
            Expr &coef = which == 0 ? p.e : which == 1 ? p.a1 : p.c;
            coef = coef + Expr(1);
            CAPTURE(which);
            CHECK_FALSE(invariance_residual(spec, Generator::from_normal(p)).is_symmetry);
        }
    }
}

TEST_CASE("classification of the theorem cases")
{
    const Expr half(Rational(1, 2));
    const Expr third(Rational(1, 3));
    const auto count = [](const Expr &alpha, FormTag tag) { return classify(make(alpha, tag)).generators.size(); };
    CHECK(count(sym("alpha"), FormTag::Arbitrary) == 1);
    CHECK(count(sym("alpha"), FormTag::Power) == 2);
    CHECK(count(sym("alpha"), FormTag::Constant) == 2);
    CHECK(count(half, FormTag::Exponential) == 1);
    CHECK(count(third, FormTag::Exponential) == 1);
    CHECK(count(third, FormTag::Power) == 2);
    const auto c = classify(make(third, FormTag::QuadPower13));
    CHECK(c.verified_only);
    CHECK(c.case_key == std::optional<std::string>("3.1"));
    CHECK_THROWS_AS(classify(make(half, FormTag::ShiftedPower23)), UnsupportedError);
    for (const auto &[spec, gen] : scaling_cases()) {
        const auto cls = classify(spec);
        REQUIRE(cls.generators.size() == 2);
        CHECK(cls.generators[0].xi_x == Expr(1));
        CHECK(proportional(cls.generators[1], gen));
    }
}

TEST_CASE("determining equations are linear in the ansatz")
{
    const auto sys = determining_system(make(sym("alpha"), FormTag::Power));
    CHECK(sys.unknowns == std::vector<std::string>{"a0", "a1", "c", "e"});
    CHECK_FALSE(sys.equations.empty());
    for (const auto &row : sys.matrix) {
        CHECK(row.size() == 4);
    }
}
