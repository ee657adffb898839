#ifndef KMN_CALCULUS_HPP
#define KMN_CALCULUS_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <kmn/expr.hpp>

namespace kmn
{

using Bindings = std::map<std::string, Expr>;

// Simultaneous substitution of symbols. Throws CyclicBindingError when the
// bindings refer to each other in a cycle (a symbol bound to an expression
// containing itself counts as a cycle).
Expr substitute(const Expr &e, const Bindings &bindings);

// Structural replacement of every occurrence of target.
Expr replace(const Expr &e, const Expr &target, const Expr &replacement);

bool free_of(const Expr &e, const std::string &v);
bool contains(const Expr &e, const Expr &sub);
std::set<std::string> free_symbols(const Expr &e);

// Partial derivative; symbols other than v are constants.
Expr diff(const Expr &e, const std::string &v, int k = 1);

/// Jet-space coordinates: independents, one dependent variable and its
/// partial derivatives named like u_x, u_xt, u_xxx. Letters are kept in the
/// order of the independents list.
class JetContext
{
public:
    JetContext(std::vector<std::string> independents = {"x", "t"}, std::string dependent = "u", int max_order = 3);

    [[nodiscard]] const std::vector<std::string> &independents() const { return independents_; }
    [[nodiscard]] const std::string &dependent() const { return dependent_; }
    [[nodiscard]] int max_order() const { return max_order_; }

    // jet("") is u, jet("xx") is u_xx.
    [[nodiscard]] Expr jet(const std::string &letters) const;
    // Derivative letters of a jet symbol name, or nullopt when it is not one.
    [[nodiscard]] std::optional<std::string> letters(const std::string &name) const;
    [[nodiscard]] bool is_jet(const std::string &name) const { return letters(name).has_value(); }
    // The jet one derivative higher in v.
    [[nodiscard]] Expr shift(const std::string &jet_name, const std::string &v) const;

private:
    std::vector<std::string> independents_;
    std::string dependent_;
    int max_order_;
};

// Total derivative D_v through the jet chain rule. Fractional derivative
// nodes in the time variable commute with D_x and compose with D_t.
Expr total_derivative(const Expr &e, const std::string &v, const JetContext &ctx);
Expr total_derivative(const Expr &e, const std::string &v, int k, const JetContext &ctx);
Expr total_derivative_t(const Expr &e, const JetContext &ctx);

// Riemann-Liouville derivative (lower terminal 0) of a finite sum of terms
// c*v^j with c free of v, by the power rule
// D^alpha v^j = Gamma(j+1)/Gamma(j+1-alpha) * v^(j-alpha). Other symbols are
// held constant. Throws UnsupportedError for terms that are not powers of v
// and DomainError for numeric exponents j <= -1.
Expr rl_power_expr(const Expr &f, const std::string &v, const Expr &alpha);

// Coefficients of e over the given monomial basis. Every basis entry is
// present in the result (zero when absent). A term whose basis part is not a
// basis monomial raises BasisError naming the term.
std::map<Expr, Expr> collect_terms(const Expr &e, const std::vector<Expr> &basis);

// Like collect_terms, but the monomials are discovered: a factor belongs to
// the monomial part when is_atom accepts its base.
std::map<Expr, Expr> collect_by(const Expr &e, const std::function<bool(const Expr &)> &is_atom);

} // namespace kmn

#endif
