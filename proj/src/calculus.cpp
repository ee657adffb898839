#include <kmn/calculus.hpp>

#include <algorithm>

#include <kmn/errors.hpp>

namespace kmn
{

namespace
{

std::vector<Expr> map_args(const Expr &e, const std::function<Expr(const Expr &)> &f)
{
    std::vector<Expr> out;
    out.reserve(e.args().size());
    for (const auto &a : e.args()) {
        out.push_back(f(a));
    }
    return out;
}

void check_acyclic(const Bindings &bindings)
{
    std::map<std::string, std::set<std::string>> edges;
    for (const auto &[name, value] : bindings) {
        for (const auto &s : free_symbols(value)) {
            if (bindings.count(s) != 0) {
                edges[name].insert(s);
            }
        }
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    std::map<std::string, int> state;
    auto visit = [&](const std::string &n, auto &&self) -> void {
        state[n] = 1;
        for (const auto &m : edges[n]) {
            if (state[m] == 1) {
                throw CyclicBindingError("cyclic binding through symbol " + m);
            }
            if (state[m] == 0) {
                self(m, self);
            }
        }
        state[n] = 2;
    };
    for (const auto &[name, value] : bindings) {
        if (state[name] == 0) {
            visit(name, visit);
        }
    }
}

Expr substitute_unchecked(const Expr &e, const Bindings &b)
{
    switch (e.kind()) {
        case Kind::number:
            return e;
        case Kind::symbol: {
            const auto it = b.find(e.name());
            return it == b.end() ? e : it->second;
        }
        case Kind::derivative:
        case Kind::frac_derivative: {
            std::string var = e.var();
            if (const auto it = b.find(var); it != b.end() && it->second.is_symbol()) {
                var = it->second.name();
            }
            auto args = map_args(e, [&](const Expr &a) { return substitute_unchecked(a, b); });
            if (e.kind() == Kind::derivative) {
                return derivative_node(args[0], var, e.order());
            }
            return fdiff(args[0], var, args[1]);
        }
        default:
            return with_args(e, map_args(e, [&](const Expr &a) { return substitute_unchecked(a, b); }));
    }
}

Expr diff_once(const Expr &e, const std::string &v)
{
    if (free_of(e, v)) {
        return Expr(0);
    }
    switch (e.kind()) {
        case Kind::number:
            return Expr(0);
        case Kind::symbol:
            return Expr(e.name() == v ? 1 : 0);
        case Kind::sum:
            return add(map_args(e, [&](const Expr &a) { return diff_once(a, v); }));
        case Kind::product: {
            std::vector<Expr> terms;
            const auto fs = e.args();
            for (std::size_t i = 0; i < fs.size(); ++i) {
                Expr d = diff_once(fs[i], v);
                if (d.is_zero()) {
                    continue;
                }
                std::vector<Expr> rest{d};
                for (std::size_t j = 0; j < fs.size(); ++j) {
                    if (j != i) {
                        rest.push_back(fs[j]);
                    }
                }
                terms.push_back(mul(std::move(rest)));
            }
            return add(std::move(terms));
        }
        case Kind::power: {
            const auto &b = e.base();
            const auto &x = e.exponent();
            if (free_of(x, v)) {
                return mul({x, pow(b, x - Expr(1)), diff_once(b, v)});
            }
            return e * (diff_once(x, v) * func("log", {b}) + x * diff_once(b, v) / b);
        }
        case Kind::function: {
            if (e.args().size() != 1) {
                return derivative_node(e, v, 1);
            }
            const auto &a = e.args()[0];
            const Expr da = diff_once(a, v);
            const auto &n = e.name();
            if (n == "exp") {
                return e * da;
            }
            if (n == "log") {
                return da / a;
            }
            if (n == "sin") {
                return func("cos", {a}) * da;
            }
            if (n == "cos") {
                return -func("sin", {a}) * da;
            }
            return func(n, {a}, e.order() + 1) * da;
        }
        case Kind::derivative:
            return derivative_node(e, v, 1);
        case Kind::frac_derivative:
            if (e.var() == v) {
                throw UnsupportedError("differentiation of a fractional derivative in its own variable " + v
                                       + " is not supported symbolically");
            }
            if (!free_of(e.frac_order(), v)) {
                throw UnsupportedError("fractional order depends on " + v);
            }
            return fdiff(diff_once(e.operand(), v), e.var(), e.frac_order());
        case Kind::gamma:
            throw UnsupportedError("derivative of Gamma(" + e.args()[0].str() + ") is not supported");
    }
    return Expr(0);
}

void collect_fd_nodes(const Expr &e, std::vector<Expr> &out)
{
    if (e.kind() == Kind::frac_derivative) {
        if (std::find(out.begin(), out.end(), e) == out.end()) {
            out.push_back(e);
        }
        return;
    }
    for (const auto &a : e.args()) {
        collect_fd_nodes(a, out);
    }
}

} // namespace

Expr substitute(const Expr &e, const Bindings &bindings)
{
    check_acyclic(bindings);
    return substitute_unchecked(e, bindings);
}

Expr replace(const Expr &e, const Expr &target, const Expr &replacement)
{
    if (e == target) {
        return replacement;
    }
    if (e.args().empty()) {
        return e;
    }
    return with_args(e, map_args(e, [&](const Expr &a) { return replace(a, target, replacement); }));
}

bool free_of(const Expr &e, const std::string &v)
{
    switch (e.kind()) {
        case Kind::number:
            return true;
        case Kind::symbol:
            return e.name() != v;
        case Kind::derivative:
        case Kind::frac_derivative:
            if (e.var() == v) {
                return false;
            }
            break;
        default:
            break;
    }
    return std::all_of(e.args().begin(), e.args().end(), [&](const Expr &a) { return free_of(a, v); });
}

bool contains(const Expr &e, const Expr &sub)
{
    if (e == sub) {
        return true;
    }
    return std::any_of(e.args().begin(), e.args().end(), [&](const Expr &a) { return contains(a, sub); });
}

std::set<std::string> free_symbols(const Expr &e)
{
    std::set<std::string> out;
    auto walk = [&](const Expr &x, auto &&self) -> void {
        if (x.is_symbol()) {
            out.insert(x.name());
        }
        if (x.kind() == Kind::derivative || x.kind() == Kind::frac_derivative) {
            out.insert(x.var());
        }
        for (const auto &a : x.args()) {
            self(a, self);
        }
    };
    walk(e, walk);
    return out;
}

Expr diff(const Expr &e, const std::string &v, int k)
{
    Expr r = e;
    for (int i = 0; i < k; ++i) {
        r = diff_once(r, v);
    }
    return r;
}

JetContext::JetContext(std::vector<std::string> independents, std::string dependent, int max_order)
    : independents_(std::move(independents)), dependent_(std::move(dependent)), max_order_(max_order)
{
    if (max_order_ < 3) {
        throw DomainError("jet order must be at least 3");
    }
    for (const auto &v : independents_) {
        if (v.size() != 1) {
            throw DomainError("independent variable names must be single letters: " + v);
        }
        if (v == dependent_) {
            throw DomainError("dependent variable coincides with an independent: " + v);
        }
    }
}

Expr JetContext::jet(const std::string &letters) const
{
    if (letters.empty()) {
        return sym(dependent_);
    }
    return sym(dependent_ + "_" + letters);
}

std::optional<std::string> JetContext::letters(const std::string &name) const
{
    if (name == dependent_) {
        return std::string();
    }
    const auto prefix = dependent_ + "_";
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) {
        return std::nullopt;
    }
    auto rest = name.substr(prefix.size());
    std::size_t last = 0;
    for (char c : rest) {
        const auto it = std::find(independents_.begin(), independents_.end(), std::string(1, c));
        if (it == independents_.end()) {
            return std::nullopt;
        }
        const auto idx = static_cast<std::size_t>(it - independents_.begin());
        if (idx < last) {
            return std::nullopt;
        }
        last = idx;
    }
    return rest;
}

Expr JetContext::shift(const std::string &jet_name, const std::string &v) const
{
    auto l = letters(jet_name);
    if (!l) {
        throw DomainError(jet_name + " is not a jet coordinate");
    }
    const auto it = std::find(independents_.begin(), independents_.end(), v);
    if (it == independents_.end()) {
        throw DomainError(v + " is not an independent variable");
    }
    std::string s = *l + v;
    auto index = [&](char c) { return std::find(independents_.begin(), independents_.end(), std::string(1, c)); };
    std::stable_sort(s.begin(), s.end(), [&](char a, char b) { return index(a) < index(b); });
    return jet(s);
}

Expr total_derivative(const Expr &e, const std::string &v, const JetContext &ctx)
{
    std::vector<Expr> fds;
    collect_fd_nodes(e, fds);
    Expr body = e;
    std::vector<Expr> holders;
    for (std::size_t i = 0; i < fds.size(); ++i) {
        holders.push_back(sym("__fd" + std::to_string(i)));
        body = replace(body, fds[i], holders.back());
    }

    std::vector<Expr> parts{diff(body, v)};
    for (const auto &s : free_symbols(body)) {
        if (!ctx.is_jet(s)) {
            continue;
        }
        if (Expr d = diff(body, s); !d.is_zero()) {
            parts.push_back(d * ctx.shift(s, v));
        }
    }
    for (std::size_t i = 0; i < fds.size(); ++i) {
        Expr d = diff(body, holders[i].name());
        if (d.is_zero()) {
            continue;
        }
        const auto &node = fds[i];
        Expr dnode = node.var() == v ? fdiff(node.operand(), node.var(), node.frac_order() + Expr(1))
                                     : fdiff(total_derivative(node.operand(), v, ctx), node.var(), node.frac_order());
        parts.push_back(d * dnode);
    }
    Expr result = add(std::move(parts));
    if (!fds.empty()) {
        Bindings back;
        for (std::size_t i = 0; i < fds.size(); ++i) {
            back[holders[i].name()] = fds[i];
        }
        result = substitute_unchecked(result, back);
    }
    return result;
}

Expr total_derivative(const Expr &e, const std::string &v, int k, const JetContext &ctx)
{
    Expr r = e;
    for (int i = 0; i < k; ++i) {
        r = total_derivative(r, v, ctx);
    }
    return r;
}

Expr total_derivative_t(const Expr &e, const JetContext &ctx)
{
    return total_derivative(e, "t", ctx);
}

Expr rl_power_expr(const Expr &f, const std::string &v, const Expr &alpha)
{
    const Expr var = sym(v);
    std::vector<Expr> out;
    for (const auto &t : terms_of(f)) {
        std::vector<Expr> coeff;
        std::vector<Expr> exps;
        for (const auto &g : factors_of(t)) {
            if (g == var) {
                exps.push_back(Expr(1));
            } else if (g.kind() == Kind::power && g.base() == var && free_of(g.exponent(), v)) {
                exps.push_back(g.exponent());
            } else if (free_of(g, v)) {
                coeff.push_back(g);
            } else {
                throw UnsupportedError("power rule needs powers of " + v + ", got factor " + g.str());
            }
        }
        const Expr j = add(exps);
        if (j.is_number() && j.value() <= Rational(-1)) {
            throw DomainError("power rule needs exponent > -1, got " + j.str());
        }
        coeff.push_back(gamma(j + Expr(1)));
        coeff.push_back(pow(gamma(j + Expr(1) - alpha), Expr(-1)));
        coeff.push_back(pow(var, j - alpha));
        out.push_back(mul(std::move(coeff)));
    }
    return add(std::move(out));
}

namespace
{

Expr atom_of(const Expr &f)
{
    return f.kind() == Kind::power ? f.base() : f;
}

} // namespace

std::map<Expr, Expr> collect_by(const Expr &e, const std::function<bool(const Expr &)> &is_atom)
{
    std::map<Expr, std::vector<Expr>> parts;
    for (const auto &t : terms_of(e)) {
        auto [c, rest] = split_coefficient(t);
        std::vector<Expr> mono;
        std::vector<Expr> coeff{num(c)};
        for (const auto &f : factors_of(rest)) {
            if (f.is_number()) {
                continue;
            }
            (is_atom(atom_of(f)) ? mono : coeff).push_back(f);
        }
        parts[mul(std::move(mono))].push_back(mul(std::move(coeff)));
    }
    std::map<Expr, Expr> out;
    for (auto &[m, cs] : parts) {
        Expr c = add(std::move(cs));
        if (!c.is_zero()) {
            out.emplace(m, c);
        }
    }
    return out;
}

std::map<Expr, Expr> collect_terms(const Expr &e, const std::vector<Expr> &basis)
{
    std::vector<Expr> atoms;
    std::map<Expr, Expr> out;
    for (const auto &m : basis) {
        out.emplace(m, Expr(0));
        for (const auto &f : factors_of(m)) {
            if (!f.is_number() && std::find(atoms.begin(), atoms.end(), atom_of(f)) == atoms.end()) {
                atoms.push_back(atom_of(f));
            }
        }
    }
    auto is_atom = [&](const Expr &a) { return std::find(atoms.begin(), atoms.end(), a) != atoms.end(); };
    for (const auto &t : terms_of(e)) {
        auto [c, rest] = split_coefficient(t);
        std::vector<Expr> mono;
        std::vector<Expr> coeff{num(c)};
        for (const auto &f : factors_of(rest)) {
            if (f.is_number()) {
                continue;
            }
            if (is_atom(atom_of(f))) {
                mono.push_back(f);
            } else {
                for (const auto &a : atoms) {
                    if (contains(f, a)) {
                        throw BasisError("term " + t.str() + " has a coefficient depending on " + a.str());
                    }
                }
                coeff.push_back(f);
            }
        }
        const Expr m = mul(std::move(mono));
        const auto it = out.find(m);
        if (it == out.end()) {
            throw BasisError("term " + t.str() + " is not expressible in the basis");
        }
        it->second = it->second + mul(std::move(coeff));
    }
    return out;
}

} // namespace kmn
