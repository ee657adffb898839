#ifndef KMN_PDE_HPP
#define KMN_PDE_HPP

#include <optional>
#include <string>
#include <vector>

#include <kmn/calculus.hpp>
#include <kmn/expr.hpp>

namespace kmn
{

enum class FormTag { Arbitrary, Constant, Power, Exponential, ShiftedPower23, QuadPower13 };

std::string to_string(FormTag tag);

/// The coefficient g(t) as one of a closed set of forms.
///   Arbitrary       g(t)
///   Constant        k
///   Power           k*t^b
///   Exponential     k*exp(b*t)
///   ShiftedPower23  k*(t-b)^(2/3)
///   QuadPower13     k*(t^2-b)^(1/3)
struct CoeffForm {
    FormTag tag = FormTag::Constant;
    Expr k = sym("k");
    Expr b = sym("b");

    [[nodiscard]] Expr at(const Expr &t) const;
    [[nodiscard]] bool weight_homogeneous() const { return tag == FormTag::Constant || tag == FormTag::Power; }
};

// Recognizes a g(t) expression as a catalog form, e.g. "k*t^b" or "2*exp(3*t)".
// Returns nullopt when the expression matches no form.
std::optional<CoeffForm> recognize_form(const Expr &g);

// Symbol used for a generic (symbolic) fractional order.
inline const std::string alpha_name = "alpha";

struct PdeSpec {
    Expr alpha = sym(alpha_name);
    int m = 2;
    int n = 3;
    int zeta = 1;
    CoeffForm g;

    void validate() const;
    [[nodiscard]] bool classical() const { return alpha.is_one(); }
};

// Jet context used throughout: independents x, t; dependent u.
const JetContext &kmn_jets();

// FD(u, t, alpha), or u_t when alpha = 1.
Expr time_term(const PdeSpec &spec);

// time_term + zeta*(u^m)_x + g(t)*(u^n)_xxx, expanded in jet symbols.
Expr pde_residual(const PdeSpec &spec);

// Spatial part zeta*(u^m)_x + g(t)*(u^n)_xxx, so that on solutions the time
// term equals its negative.
Expr spatial_part(const PdeSpec &spec);

struct ScalingWeights {
    Expr w_t;
    Expr w_x;
    Expr w_u;
};

// lambda-exponents of the three PDE terms under t -> l^w_t t, x -> l^w_x x,
// u -> l^w_u u. Throws UnsupportedError("... not weight-homogeneous") for
// forms other than Constant and Power.
std::vector<Expr> term_weights(const PdeSpec &spec, const ScalingWeights &w);
bool scaling_invariance_check(const PdeSpec &spec, const ScalingWeights &w);

/// Infinitesimals of X = xi_t d/dt + xi_x d/dx + eta d/du.
struct NormalForm {
    Expr e;  // xi_t = e*t
    Expr a0; // xi_x = a0 + a1*x
    Expr a1;
    Expr c;  // eta = c*u
};

struct Generator {
    Expr xi_t;
    Expr xi_x;
    Expr eta;

    static Generator from_normal(const NormalForm &nf);
    // The affine/scaling normal form when the infinitesimals have that shape.
    [[nodiscard]] std::optional<NormalForm> normal_form() const;
    [[nodiscard]] bool is_zero() const { return xi_t.is_zero() && xi_x.is_zero() && eta.is_zero(); }
    [[nodiscard]] std::string str() const;
};

// True when a and b are nonzero scalar multiples of each other (the scalar
// may depend on parameters but not on t, x, u).
bool proportional(const Generator &a, const Generator &b);

} // namespace kmn

#endif
