#ifndef KMN_POLY_HPP
#define KMN_POLY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <kmn/expr.hpp>

namespace kmn
{

// atom -> positive exponent
using Monomial = std::map<Expr, int>;

// Graded lexicographic order on monomials.
struct MonomialLess {
    bool operator()(const Monomial &a, const Monomial &b) const;
};

/// Multivariate polynomial with rational coefficients over opaque Expr atoms.
/// Anything that is not a positive integer power of an atom (including
/// x^(1/2) or Gamma(...)) is itself treated as an atom.
class Poly
{
public:
    Poly() = default;
    Poly(const Rational &c); // NOLINT(google-explicit-constructor)

    static Poly from_expr(const Expr &e);
    static Poly atom(const Expr &a);

    [[nodiscard]] Expr to_expr() const;
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] bool is_constant() const;
    [[nodiscard]] Rational constant_value() const; // only for constants
    [[nodiscard]] int degree() const;
    [[nodiscard]] const std::map<Monomial, Rational, MonomialLess> &terms() const { return terms_; }
    [[nodiscard]] std::pair<Monomial, Rational> leading_term() const;

    // Quotient when d divides *this exactly, else nullopt.
    [[nodiscard]] std::optional<Poly> divide_exact(const Poly &d) const;
    // Positive rational c such that *this / c has coprime integer coefficients
    // and a positive leading coefficient sign is preserved.
    [[nodiscard]] Rational content() const;
    // Largest monomial dividing every term.
    [[nodiscard]] Monomial monomial_content() const;
    [[nodiscard]] Poly divide_monomial(const Monomial &m) const;

    Poly &operator+=(const Poly &o);
    Poly &operator-=(const Poly &o);
    Poly &operator*=(const Poly &o);
    friend Poly operator+(Poly a, const Poly &b) { return a += b; }
    friend Poly operator-(Poly a, const Poly &b) { return a -= b; }
    friend Poly operator*(Poly a, const Poly &b) { return a *= b; }
    friend Poly operator-(const Poly &a) { return Poly() - a; }
    friend bool operator==(const Poly &a, const Poly &b) { return a.terms_ == b.terms_; }
    [[nodiscard]] Poly pow(int k) const;
    [[nodiscard]] Poly scaled(const Rational &c) const;

private:
    void add_term(const Monomial &m, const Rational &c);
    std::map<Monomial, Rational, MonomialLess> terms_;
};

/// Quotient of polynomials. Equality is decided by cross multiplication, so
/// no multivariate gcd is needed; cancellation is best-effort.
class RatFunc
{
public:
    RatFunc() : den_(Rational(1)) {}
    RatFunc(const Rational &c) : num_(c), den_(Rational(1)) {} // NOLINT(google-explicit-constructor)
    RatFunc(Poly num, Poly den);

    // Negative integer powers go to the denominator.
    static RatFunc from_expr(const Expr &e);

    [[nodiscard]] const Poly &num() const { return num_; }
    [[nodiscard]] const Poly &den() const { return den_; }
    [[nodiscard]] bool is_zero() const { return num_.is_zero(); }
    [[nodiscard]] bool is_constant() const;
    [[nodiscard]] bool is_polynomial() const { return den_.is_constant(); }
    [[nodiscard]] Expr to_expr() const;

    RatFunc &operator+=(const RatFunc &o);
    RatFunc &operator-=(const RatFunc &o);
    RatFunc &operator*=(const RatFunc &o);
    RatFunc &operator/=(const RatFunc &o);
    friend RatFunc operator+(RatFunc a, const RatFunc &b) { return a += b; }
    friend RatFunc operator-(RatFunc a, const RatFunc &b) { return a -= b; }
    friend RatFunc operator*(RatFunc a, const RatFunc &b) { return a *= b; }
    friend RatFunc operator/(RatFunc a, const RatFunc &b) { return a /= b; }
    friend RatFunc operator-(const RatFunc &a) { return RatFunc(-a.num_, a.den_); }
    friend bool operator==(const RatFunc &a, const RatFunc &b) { return a.num_ * b.den_ == b.num_ * a.den_; }

private:
    void normalize();
    Poly num_;
    Poly den_;
};

// Exact equality of two expressions read as rational functions of their atoms.
bool rational_equal(const Expr &a, const Expr &b);

// Basis of the right nullspace of a matrix over rational functions, computed
// by Gauss-Jordan elimination. Pivots are assumed nonzero as rational
// functions (the generic case). Each basis vector has a 1 in its free column
// and polynomial entries are not guaranteed.
std::vector<std::vector<RatFunc>> nullspace(std::vector<std::vector<RatFunc>> rows, std::size_t ncols);

} // namespace kmn

#endif
