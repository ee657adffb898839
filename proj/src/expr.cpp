#include <kmn/expr.hpp>

#include <algorithm>
#include <cassert>
#include <map>
#include <utility>

#include <boost/functional/hash.hpp>

#include <kmn/errors.hpp>

namespace kmn
{

struct Node {
    Kind kind{Kind::number};
    Rational value;
    std::string name; // symbol name, function name, or derivative variable
    int order = 0;
    std::vector<Expr> args;
    std::size_t hash = 0;
};

namespace
{

constexpr std::int64_t max_expand_power = 64;

Expr make_node(Kind kind, Rational value, std::string name, int order, std::vector<Expr> args)
{
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->value = std::move(value);
    n->name = std::move(name);
    n->order = order;
    n->args = std::move(args);
    std::size_t seed = static_cast<std::size_t>(kind);
    boost::hash_combine(seed, n->value.hash());
    boost::hash_combine(seed, std::hash<std::string>{}(n->name));
    boost::hash_combine(seed, n->order);
    for (const auto &a : n->args) {
        boost::hash_combine(seed, a.hash());
    }
    n->hash = seed;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

const Expr &zero_expr()
{
    static const Expr z = make_node(Kind::number, Rational(0), "", 0, {});
    return z;
}

const Expr &one_expr()
{
    static const Expr o = make_node(Kind::number, Rational(1), "", 0, {});
    return o;
}

Expr product_node(std::vector<Expr> factors)
{
    return make_node(Kind::product, Rational(0), "", 0, std::move(factors));
}

// coefficient * rest, where rest is canonical and coefficient-free.
Expr scale_term(const Rational &c, const Expr &rest)
{
    if (c.is_one()) {
        return rest;
    }
    if (rest.is_one()) {
        return num(c);
    }
    std::vector<Expr> fs{num(c)};
    if (rest.kind() == Kind::product) {
        fs.insert(fs.end(), rest.args().begin(), rest.args().end());
    } else {
        fs.push_back(rest);
    }
    return product_node(std::move(fs));
}

bool positive_assumed(const Expr &f)
{
    switch (f.kind()) {
        case Kind::number:
            return f.value().sign() > 0;
        case Kind::symbol:
            return true;
        case Kind::power:
            return f.base().is_symbol() || (f.base().is_number() && f.base().value().sign() > 0);
        case Kind::function:
            return f.name() == "exp";
        default:
            return false;
    }
}

bool is_nonpositive_integer(const Expr &e)
{
    return e.is_number() && e.value().is_integer() && e.value().sign() <= 0;
}

int compare_args(std::span<const Expr> a, std::span<const Expr> b)
{
    const auto n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (const int c = compare(a[i], b[i]); c != 0) {
            return c;
        }
    }
    if (a.size() != b.size()) {
        return a.size() < b.size() ? -1 : 1;
    }
    return 0;
}

int compare_strings(const std::string &a, const std::string &b)
{
    const int c = a.compare(b);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

} // namespace

Expr::Expr() : Expr(zero_expr()) {}

Expr::Expr(std::int64_t v) : Expr(num(Rational(v))) {}

Expr::Expr(const Rational &v) : Expr(num(v)) {}

Kind Expr::kind() const
{
    return node_->kind;
}

const Rational &Expr::value() const
{
    return node_->value;
}

const std::string &Expr::name() const
{
    return node_->name;
}

const std::string &Expr::var() const
{
    return node_->name;
}

int Expr::order() const
{
    return node_->order;
}

std::span<const Expr> Expr::args() const
{
    return node_->args;
}

std::size_t Expr::hash() const
{
    return node_->hash;
}

const Expr &Expr::base() const
{
    assert(kind() == Kind::power);
    return node_->args[0];
}

const Expr &Expr::exponent() const
{
    assert(kind() == Kind::power);
    return node_->args[1];
}

const Expr &Expr::operand() const
{
    assert(kind() == Kind::derivative || kind() == Kind::frac_derivative);
    return node_->args[0];
}

const Expr &Expr::frac_order() const
{
    assert(kind() == Kind::frac_derivative);
    return node_->args[1];
}

bool Expr::is_symbol(const std::string &n) const
{
    return kind() == Kind::symbol && name() == n;
}

bool Expr::is_zero() const
{
    return kind() == Kind::number && value().is_zero();
}

bool Expr::is_one() const
{
    return kind() == Kind::number && value().is_one();
}

bool Expr::is_integer() const
{
    return kind() == Kind::number && value().is_integer();
}

bool operator==(const Expr &a, const Expr &b)
{
    if (a.node_ == b.node_) {
        return true;
    }
    return a.hash() == b.hash() && compare(a, b) == 0;
}

bool operator<(const Expr &a, const Expr &b)
{
    return compare(a, b) < 0;
}

int compare(const Expr &a, const Expr &b)
{
    if (a.kind() != b.kind()) {
        return a.kind() < b.kind() ? -1 : 1;
    }
    switch (a.kind()) {
        case Kind::number: {
            const auto c = a.value() <=> b.value();
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case Kind::symbol:
            return compare_strings(a.name(), b.name());
        case Kind::power:
        case Kind::product:
        case Kind::sum:
        case Kind::gamma:
            return compare_args(a.args(), b.args());
        case Kind::function:
        case Kind::derivative:
        case Kind::frac_derivative:
            if (const int c = compare_strings(a.name(), b.name()); c != 0) {
                return c;
            }
            if (a.order() != b.order()) {
                return a.order() < b.order() ? -1 : 1;
            }
            return compare_args(a.args(), b.args());
    }
    return 0;
}

Expr num(const Rational &v)
{
    if (v.is_zero()) {
        return zero_expr();
    }
    if (v.is_one()) {
        return one_expr();
    }
    return make_node(Kind::number, v, "", 0, {});
}

Expr sym(const std::string &name)
{
    return make_node(Kind::symbol, Rational(0), name, 0, {});
}

std::pair<Rational, Expr> split_coefficient(const Expr &term)
{
    if (term.is_number()) {
        return {term.value(), one_expr()};
    }
    if (term.kind() == Kind::product && term.args()[0].is_number()) {
        const auto args = term.args();
        if (args.size() == 2) {
            return {args[0].value(), args[1]};
        }
        return {args[0].value(), product_node(std::vector<Expr>(args.begin() + 1, args.end()))};
    }
    return {Rational(1), term};
}

std::vector<Expr> terms_of(const Expr &e)
{
    if (e.kind() == Kind::sum) {
        return {e.args().begin(), e.args().end()};
    }
    if (e.is_zero()) {
        return {};
    }
    return {e};
}

std::vector<Expr> factors_of(const Expr &e)
{
    if (e.kind() == Kind::product) {
        return {e.args().begin(), e.args().end()};
    }
    return {e};
}

Expr add(std::vector<Expr> terms)
{
    Rational constant;
    std::map<Expr, Rational> acc;
    auto absorb = [&](const Expr &t, auto &&self) -> void {
        if (t.kind() == Kind::sum) {
            for (const auto &a : t.args()) {
                self(a, self);
            }
        } else if (t.is_number()) {
            constant += t.value();
        } else {
            auto [c, rest] = split_coefficient(t);
            acc[rest] += c;
        }
    };
    for (const auto &t : terms) {
        absorb(t, absorb);
    }
    std::vector<Expr> out;
    if (!constant.is_zero()) {
        out.push_back(num(constant));
    }
    for (const auto &[rest, c] : acc) {
        if (!c.is_zero()) {
            out.push_back(scale_term(c, rest));
        }
    }
    if (out.empty()) {
        return zero_expr();
    }
    if (out.size() == 1) {
        return out.front();
    }
    return make_node(Kind::sum, Rational(0), "", 0, std::move(out));
}

Expr mul(std::vector<Expr> factors)
{
    Rational coeff(1);
    std::map<Expr, std::vector<Expr>> bases;
    std::vector<Expr> sums;
    auto absorb = [&](const Expr &f, auto &&self) -> void {
        switch (f.kind()) {
            case Kind::number:
                coeff *= f.value();
                break;
            case Kind::product:
                for (const auto &a : f.args()) {
                    self(a, self);
                }
                break;
            case Kind::sum:
                sums.push_back(f);
                break;
            case Kind::power:
                bases[f.base()].push_back(f.exponent());
                break;
            default:
                bases[f].push_back(one_expr());
        }
    };
    for (const auto &f : factors) {
        absorb(f, absorb);
    }

    std::vector<Expr> merged;
    bool renormalize = false;
    for (const auto &[b, exps] : bases) {
        const Expr e = exps.size() == 1 ? exps.front() : add(exps);
        Expr p = pow(b, e);
        if (p.is_number()) {
            coeff *= p.value();
            continue;
        }
        if (p.kind() == Kind::product || p.kind() == Kind::sum) {
            renormalize = true;
        }
        merged.push_back(std::move(p));
    }
    if (coeff.is_zero()) {
        return zero_expr();
    }
    if (renormalize) {
        merged.push_back(num(coeff));
        merged.insert(merged.end(), sums.begin(), sums.end());
        return mul(std::move(merged));
    }
    if (!sums.empty()) {
        merged.push_back(num(coeff));
        std::vector<Expr> acc{mul(std::move(merged))};
        for (const auto &s : sums) {
            std::vector<Expr> next;
            next.reserve(acc.size() * s.args().size());
            for (const auto &a : acc) {
                for (const auto &t : s.args()) {
                    next.push_back(mul({a, t}));
                }
            }
            acc = std::move(next);
        }
        return add(std::move(acc));
    }
    std::sort(merged.begin(), merged.end(), [](const Expr &a, const Expr &b) { return compare(a, b) < 0; });
    if (merged.empty()) {
        return num(coeff);
    }
    if (coeff.is_one() && merged.size() == 1) {
        return merged.front();
    }
    if (!coeff.is_one()) {
        merged.insert(merged.begin(), num(coeff));
    }
    return product_node(std::move(merged));
}

Expr pow(const Expr &base, const Expr &exp)
{
    if (exp.is_number()) {
        if (exp.value().is_zero()) {
            return one_expr();
        }
        if (exp.value().is_one()) {
            return base;
        }
    }
    switch (base.kind()) {
        case Kind::number: {
            const auto &b = base.value();
            if (b.is_zero()) {
                if (exp.is_number()) {
                    if (exp.value().is_negative()) {
                        throw DivisionByZeroError("division by zero during constant folding");
                    }
                    return zero_expr();
                }
                break;
            }
            if (b.is_one()) {
                return one_expr();
            }
            if (exp.is_integer()) {
                if (const auto n = exp.value().to_int(); n && *n >= -4096 && *n <= 4096) {
                    return num(b.pow(*n));
                }
            }
            break;
        }
        case Kind::power: {
            const auto &ib = base.base();
            if (exp.is_integer() || ib.is_symbol() || (ib.is_number() && ib.value().sign() > 0)) {
                return pow(ib, mul({base.exponent(), exp}));
            }
            break;
        }
        case Kind::product: {
            const bool distribute = exp.is_integer()
                                    || std::all_of(base.args().begin(), base.args().end(), positive_assumed);
            if (distribute) {
                std::vector<Expr> fs;
                for (const auto &f : base.args()) {
                    fs.push_back(pow(f, exp));
                }
                return mul(std::move(fs));
            }
            break;
        }
        case Kind::sum:
            if (exp.is_integer() && exp.value().sign() > 0) {
                const auto n = exp.value().to_int();
                if (n && *n <= max_expand_power) {
                    Expr r = base;
                    for (std::int64_t i = 1; i < *n; ++i) {
                        r = mul({r, base});
                    }
                    return r;
                }
            }
            break;
        case Kind::gamma:
            if (is_nonpositive_integer(base.args()[0]) && exp.is_integer() && exp.value().is_negative()) {
                // 1/Gamma vanishes at its poles.
                return zero_expr();
            }
            break;
        default:
            break;
    }
    return make_node(Kind::power, Rational(0), "", 0, {base, exp});
}

bool is_builtin_function(const std::string &name)
{
    return name == "exp" || name == "log" || name == "sin" || name == "cos";
}

Expr func(const std::string &name, std::vector<Expr> args, int order)
{
    if (is_builtin_function(name)) {
        if (args.size() != 1 || order != 0) {
            throw UnsupportedError(name + " takes exactly one argument");
        }
        const auto &a = args[0];
        if (name == "exp" && a.is_zero()) {
            return one_expr();
        }
        if (name == "log" && a.is_one()) {
            return zero_expr();
        }
        if (name == "sin" && a.is_zero()) {
            return zero_expr();
        }
        if (name == "cos" && a.is_zero()) {
            return one_expr();
        }
    }
    if (order != 0 && args.size() != 1) {
        throw UnsupportedError("derivative order on a non-unary function " + name);
    }
    return make_node(Kind::function, Rational(0), name, order, std::move(args));
}

Expr gamma(const Expr &arg)
{
    if (arg.is_integer() && arg.value().sign() > 0) {
        const auto n = arg.value().to_int();
        if (n && *n <= 171) {
            Rational f(1);
            for (std::int64_t i = 2; i < *n; ++i) {
                f *= Rational(i);
            }
            return num(f);
        }
    }
    return make_node(Kind::gamma, Rational(0), "", 0, {arg});
}

Expr fdiff(const Expr &operand, const std::string &var, const Expr &order)
{
    if (order.is_zero()) {
        return operand;
    }
    if (operand.is_zero()) {
        return zero_expr();
    }
    if (operand.kind() == Kind::sum) {
        std::vector<Expr> ts;
        for (const auto &t : operand.args()) {
            ts.push_back(fdiff(t, var, order));
        }
        return add(std::move(ts));
    }
    if (auto [c, rest] = split_coefficient(operand); !c.is_one()) {
        return mul({num(c), fdiff(rest, var, order)});
    }
    return make_node(Kind::frac_derivative, Rational(0), var, 0, {operand, order});
}

Expr derivative_node(const Expr &operand, const std::string &var, int k)
{
    if (k == 0) {
        return operand;
    }
    if (operand.kind() == Kind::derivative && operand.var() == var) {
        return derivative_node(operand.operand(), var, operand.order() + k);
    }
    return make_node(Kind::derivative, Rational(0), var, k, {operand});
}

Expr operator+(const Expr &a, const Expr &b)
{
    return add({a, b});
}

Expr operator-(const Expr &a, const Expr &b)
{
    return add({a, mul({num(Rational(-1)), b})});
}

Expr operator*(const Expr &a, const Expr &b)
{
    return mul({a, b});
}

Expr operator/(const Expr &a, const Expr &b)
{
    return mul({a, pow(b, num(Rational(-1)))});
}

Expr operator-(const Expr &a)
{
    return mul({num(Rational(-1)), a});
}

Expr &operator+=(Expr &a, const Expr &b)
{
    a = a + b;
    return a;
}

Expr &operator*=(Expr &a, const Expr &b)
{
    a = a * b;
    return a;
}

Expr with_args(const Expr &e, std::vector<Expr> args)
{
    switch (e.kind()) {
        case Kind::number:
        case Kind::symbol:
            return e;
        case Kind::power:
            return pow(args.at(0), args.at(1));
        case Kind::product:
            return mul(std::move(args));
        case Kind::sum:
            return add(std::move(args));
        case Kind::function:
            return func(e.name(), std::move(args), e.order());
        case Kind::derivative:
            return derivative_node(args.at(0), e.var(), e.order());
        case Kind::frac_derivative:
            return fdiff(args.at(0), e.var(), args.at(1));
        case Kind::gamma:
            return gamma(args.at(0));
    }
    return e;
}

Expr simplify(const Expr &e)
{
    auto rebuild = [](std::span<const Expr> args) {
        std::vector<Expr> out;
        out.reserve(args.size());
        for (const auto &a : args) {
            out.push_back(simplify(a));
        }
        return out;
    };
    switch (e.kind()) {
        case Kind::number:
        case Kind::symbol:
            return e;
        case Kind::power:
            return pow(simplify(e.base()), simplify(e.exponent()));
        case Kind::product:
            return mul(rebuild(e.args()));
        case Kind::sum:
            return add(rebuild(e.args()));
        case Kind::function:
            return func(e.name(), rebuild(e.args()), e.order());
        case Kind::derivative:
            return derivative_node(simplify(e.operand()), e.var(), e.order());
        case Kind::frac_derivative:
            return fdiff(simplify(e.operand()), e.var(), simplify(e.frac_order()));
        case Kind::gamma:
            return gamma(simplify(e.args()[0]));
    }
    return e;
}

// ---------------------------------------------------------------------------
// Printing. The output is valid input for the expression parser.

namespace
{

enum Prec : int { prec_sum = 1, prec_product = 2, prec_unary = 3, prec_power = 4, prec_atom = 5 };

std::string print(const Expr &e, int &prec);

std::string print_at(const Expr &e, int required)
{
    int p = prec_atom;
    auto s = print(e, p);
    if (p < required) {
        return "(" + s + ")";
    }
    return s;
}

std::string print_product(const Expr &e, int &prec)
{
    auto [c, rest] = split_coefficient(e);
    std::vector<std::string> numer;
    std::vector<Expr> denom;
    for (const auto &f : factors_of(rest)) {
        // A sum raised to anything but -1 stays in the numerator: (a+b)^k
        // with k > 1 would re-expand when read back.
        const bool reciprocal = f.kind() == Kind::power && f.exponent().is_number()
                                && f.exponent().value().is_negative()
                                && (f.base().kind() != Kind::sum || f.exponent().value() == Rational(-1));
        if (reciprocal) {
            denom.push_back(pow(f.base(), num(-f.exponent().value())));
        } else {
            numer.push_back(print_at(f, prec_unary));
        }
    }
    std::string out;
    bool negate = false;
    if (c == Rational(-1) && !numer.empty()) {
        negate = true;
    } else if (!c.is_one() || numer.empty()) {
        numer.insert(numer.begin(), c.to_string());
    }
    for (std::size_t i = 0; i < numer.size(); ++i) {
        out += (i == 0 ? "" : "*") + numer[i];
    }
    for (const auto &d : denom) {
        out += "/" + print_at(d, prec_power);
    }
    if (negate) {
        prec = prec_unary;
        return "-" + out;
    }
    prec = prec_product;
    return out;
}

bool term_is_negative(const Expr &t)
{
    return split_coefficient(t).first.is_negative();
}

std::string print(const Expr &e, int &prec)
{
    switch (e.kind()) {
        case Kind::number: {
            const auto &v = e.value();
            if (v.is_negative()) {
                prec = v.is_integer() ? prec_unary : prec_product;
            } else {
                prec = v.is_integer() ? prec_atom : prec_product;
            }
            return v.to_string();
        }
        case Kind::symbol:
            prec = prec_atom;
            return e.name();
        case Kind::power:
            prec = prec_power;
            return print_at(e.base(), prec_atom) + "^" + print_at(e.exponent(), prec_atom);
        case Kind::product:
            return print_product(e, prec);
        case Kind::sum: {
            prec = prec_sum;
            std::string out;
            bool first = true;
            for (const auto &t : e.args()) {
                if (first) {
                    out += print_at(t, prec_sum);
                    first = false;
                } else if (term_is_negative(t)) {
                    out += " - " + print_at(-t, prec_product);
                } else {
                    out += " + " + print_at(t, prec_product);
                }
            }
            return out;
        }
        case Kind::function: {
            prec = prec_atom;
            std::string out = e.name() + std::string(static_cast<std::size_t>(e.order()), '\'') + "(";
            for (std::size_t i = 0; i < e.args().size(); ++i) {
                out += (i == 0 ? "" : ", ") + print_at(e.args()[i], prec_sum);
            }
            return out + ")";
        }
        case Kind::derivative:
            prec = prec_atom;
            return "diff(" + print_at(e.operand(), prec_sum) + ", " + e.var() + ", " + std::to_string(e.order()) + ")";
        case Kind::frac_derivative:
            prec = prec_atom;
            return "fdiff(" + print_at(e.operand(), prec_sum) + ", " + e.var() + ", "
                   + print_at(e.frac_order(), prec_sum) + ")";
        case Kind::gamma:
            prec = prec_atom;
            return "Gamma(" + print_at(e.args()[0], prec_sum) + ")";
    }
    return {};
}

} // namespace

std::string Expr::str() const
{
    int p = prec_atom;
    return print(*this, p);
}

} // namespace kmn
