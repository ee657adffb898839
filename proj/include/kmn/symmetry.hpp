#ifndef KMN_SYMMETRY_HPP
#define KMN_SYMMETRY_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <kmn/pde.hpp>
#include <kmn/poly.hpp>

namespace kmn
{

inline constexpr int default_truncation = 5;

// Generalized binomial coefficient alpha(alpha-1)...(alpha-m+1)/m!.
Expr binomial_alpha(const Expr &alpha, int m);

// One surviving Leibniz series term coeff * FD(operand, t, alpha - m).
struct SeriesTerm {
    int m;
    Expr operand; // u or u_x
    Expr coeff;
};

struct ProlongationResult {
    Expr eta_alpha;      // full coefficient of d/d(D^alpha u), series included
    Expr fd_coefficient; // eta_u - alpha*D_t xi_t, the factor on D^alpha u
    Expr eta_x;
    Expr eta_xx;
    Expr eta_xxx;
    int truncation = default_truncation;
    std::vector<SeriesTerm> series;
};

// Fractional prolongation with the Leibniz series truncated at M terms.
ProlongationResult eta_alpha(const Generator &gen, const Expr &alpha, int M = default_truncation);

std::array<Expr, 3> integer_prolongations(const Generator &gen, const JetContext &ctx);

struct InvarianceResult {
    Expr residual;                  // X^(alpha) R restricted to solutions
    std::vector<Expr> obstructions; // terms carrying D^(alpha-m) u or D^(alpha-m) u_x
    bool is_symmetry = false;
};

InvarianceResult invariance_residual(const PdeSpec &spec, const Generator &gen, int M = default_truncation);

// True when e vanishes as a polynomial in the coordinate-dependent atoms
// with rational-function coefficients in the parameters.
bool vanishes_identically(const Expr &e);

/// Linear equations on the ansatz xi_t = e*t, xi_x = a0 + a1*x, eta = c*u.
struct DeterminingSystem {
    std::vector<std::string> unknowns; // column order of matrix
    std::vector<Expr> monomials;       // the coordinate monomial each equation came from
    std::vector<Expr> equations;       // linear forms in the unknowns
    std::vector<std::vector<RatFunc>> matrix;
};

DeterminingSystem determining_system(const PdeSpec &spec, int M = default_truncation);

struct Classification {
    std::optional<std::string> case_key; // theorem case such as "1.2", when the spec is in the table
    std::vector<Generator> generators;
    std::vector<NormalForm> normal_forms;
    bool verified_only = false; // special forms: translation checked, not solved for
};

std::optional<std::string> theorem_case(const PdeSpec &spec);

// Basis of the symmetry algebra within the ansatz. Translation comes first;
// a scaling generator is normalized to xi_t = -t.
Classification classify(const PdeSpec &spec, int M = default_truncation);

} // namespace kmn

#endif
