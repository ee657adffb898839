#ifndef KMN_EXPR_HPP
#define KMN_EXPR_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <kmn/rational.hpp>

namespace kmn
{

// Node kinds, listed in canonical order: when two nodes of different kinds are
// compared, the kind with the smaller value sorts first.
enum class Kind : std::uint8_t {
    number,
    symbol,
    power,
    product,
    sum,
    function,        // named application f(args); unary functions carry a derivative order
    derivative,      // unevaluated d^k/dv^k, used only where diff cannot proceed structurally
    frac_derivative, // Riemann-Liouville derivative FD(e, v, order), lower terminal 0
    gamma,
};

struct Node;

/// Immutable, canonical symbolic expression.
///
/// Every Expr is built through the canonicalizing constructors below, so two
/// expressions that denote the same canonical form compare equal with ==.
/// Sums and products are flattened, sorted, and like terms/bases merged;
/// products are expanded over sums and positive integer powers of sums are
/// expanded, making the canonical form a polynomial in the opaque atoms.
/// Symbols are treated as positive reals when distributing non-integer powers.
class Expr
{
public:
    Expr(); // zero
    Expr(std::int64_t v); // NOLINT(google-explicit-constructor)
    Expr(int v) : Expr(static_cast<std::int64_t>(v)) {} // NOLINT(google-explicit-constructor)
    Expr(const Rational &v); // NOLINT(google-explicit-constructor)

    [[nodiscard]] Kind kind() const;
    [[nodiscard]] const Rational &value() const;
    [[nodiscard]] const std::string &name() const;
    [[nodiscard]] const std::string &var() const;
    [[nodiscard]] int order() const;
    [[nodiscard]] std::span<const Expr> args() const;
    [[nodiscard]] std::size_t hash() const;

    // Accessors for specific kinds.
    [[nodiscard]] const Expr &base() const;     // power
    [[nodiscard]] const Expr &exponent() const; // power
    [[nodiscard]] const Expr &operand() const;  // derivative, frac_derivative
    [[nodiscard]] const Expr &frac_order() const;

    [[nodiscard]] bool is_number() const { return kind() == Kind::number; }
    [[nodiscard]] bool is_symbol() const { return kind() == Kind::symbol; }
    [[nodiscard]] bool is_symbol(const std::string &n) const;
    [[nodiscard]] bool is_zero() const;
    [[nodiscard]] bool is_one() const;
    [[nodiscard]] bool is_integer() const;

    [[nodiscard]] std::string str() const;

    friend bool operator==(const Expr &a, const Expr &b);
    friend bool operator<(const Expr &a, const Expr &b);
    friend std::ostream &operator<<(std::ostream &os, const Expr &e) { return os << e.str(); }

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

private:
    std::shared_ptr<const Node> node_;
};

// Total ordering on canonical expressions: negative, zero or positive.
int compare(const Expr &a, const Expr &b);

struct ExprHash {
    std::size_t operator()(const Expr &e) const { return e.hash(); }
};

// Canonicalizing constructors.
Expr num(const Rational &v);
Expr sym(const std::string &name);
Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr pow(const Expr &base, const Expr &exp);
Expr func(const std::string &name, std::vector<Expr> args, int order = 0);
Expr gamma(const Expr &arg);
Expr fdiff(const Expr &operand, const std::string &var, const Expr &order);
// Raw derivative node; callers normally go through diff() which only falls
// back to this for multi-argument function applications.
Expr derivative_node(const Expr &operand, const std::string &var, int k);

Expr operator+(const Expr &a, const Expr &b);
Expr operator-(const Expr &a, const Expr &b);
Expr operator*(const Expr &a, const Expr &b);
Expr operator/(const Expr &a, const Expr &b);
Expr operator-(const Expr &a);
Expr &operator+=(Expr &a, const Expr &b);
Expr &operator*=(Expr &a, const Expr &b);

/// Rebuilds e bottom-up through the canonical constructors. Idempotent.
Expr simplify(const Expr &e);

// Splits a canonical term into its rational coefficient and the remaining
// coefficient-free part (1 for a pure number).
std::pair<Rational, Expr> split_coefficient(const Expr &term);

// Terms of a sum (or the expression itself); factors of a product (or itself).
std::vector<Expr> terms_of(const Expr &e);
std::vector<Expr> factors_of(const Expr &e);

bool is_builtin_function(const std::string &name);

// Rebuilds a node of the same kind (and name, variable, order) from new
// children through the canonical constructors.
Expr with_args(const Expr &e, std::vector<Expr> args);

} // namespace kmn

#endif
