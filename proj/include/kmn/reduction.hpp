#ifndef KMN_REDUCTION_HPP
#define KMN_REDUCTION_HPP

#include <optional>
#include <string>
#include <vector>

#include <kmn/calculus.hpp>
#include <kmn/pde.hpp>

namespace kmn
{

/// Group-invariant ansatz u = x^p * h(r), r = t * x^q, and the reduced ODE.
struct SimilarityReduction {
    Expr p;
    Expr q;
    Expr s;           // x-power factored out of the substituted residual
    Expr scale{1};    // reduced_ode = scale * x^(-s) * residual
    Expr reduced_ode; // in r, h(r), h'(r), h''(r), h'''(r), fdiff(h(r), r, alpha)
    bool translation_case = false;

    [[nodiscard]] Expr r_invariant() const; // t*x^q
    [[nodiscard]] Expr z_invariant() const; // u*x^(-p)
};

// r and z by the method of characteristics. Only p and q are filled in.
SimilarityReduction characteristic_invariants(const Generator &gen);

// Substitutes the ansatz into the PDE residual, factors out x^s and fills in
// s, scale and reduced_ode. The scale clears parameter denominators.
SimilarityReduction similarity_substitute(const PdeSpec &spec, SimilarityReduction red);

SimilarityReduction reduce(const PdeSpec &spec, const Generator &gen);

// Coefficient of fdiff(h(r), r, .) in a reduced ODE.
Expr fd_coefficient(const Expr &reduced_ode);

// Rescales red so its FD coefficient equals target, when the ratio is a
// parameter-free constant. Returns false (and leaves red alone) otherwise.
bool normalize_fd_coefficient(SimilarityReduction &red, const Expr &target);

// f(r) and its derivatives renamed to h(r).
Expr rename_unknown(const Expr &e, const std::string &from, const std::string &to = "h");

struct CoefficientEntry {
    Expr monomial;
    Expr derived; // after dividing by the FD coefficient
    Expr printed;
    bool equal = false;
};

struct ComparisonReport {
    bool equal = false;
    std::vector<CoefficientEntry> entries; // every monomial present in either form
    std::vector<CoefficientEntry> mismatches;
};

ComparisonReport compare_reduced_forms(const Expr &derived, const Expr &printed);

// Max relative deviation between the PDE residual of u = x^p*h_test(t*x^q)
// and x^s * reduced_ode(h_test) / scale over the points (x, t). Parameters
// (alpha when symbolic, k, b) are bound exactly by values.
double reduced_residual_identity_check(const PdeSpec &spec, const SimilarityReduction &red, const Expr &h_test,
                                       const std::vector<std::pair<double, double>> &points,
                                       const Bindings &values = {});

struct KernelSolution {
    Expr h;        // kappa*t^(alpha-1)/Gamma(alpha)
    Expr residual; // power-rule D^alpha h, identically 0
};

// Requires 0 < alpha < 1; alpha = 1 raises DomainError naming the constant
// solution.
KernelSolution kernel_solution(const Rational &alpha, const Rational &kappa);
// Same for a symbolic order.
KernelSolution kernel_solution(const Expr &alpha, const Expr &kappa);

/// A reduction case: spec plus the generator the reduction uses.
struct ReductionCase {
    std::string key; // "1", "2.1", ..., "4.2"
    PdeSpec spec;
    Generator generator;
    Rational test_alpha;     // value used for numeric checks when alpha is generic
    Bindings test_values;    // k, b for numeric checks
};

const std::vector<ReductionCase> &reduction_cases();
const ReductionCase &reduction_case(const std::string &key);

} // namespace kmn

#endif
