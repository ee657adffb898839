#include <kmn/poly.hpp>

#include <algorithm>

#include <kmn/errors.hpp>

namespace kmn
{

namespace
{

int total_degree(const Monomial &m)
{
    int d = 0;
    for (const auto &[a, k] : m) {
        d += k;
    }
    return d;
}

bool divides(const Monomial &d, const Monomial &m)
{
    for (const auto &[a, k] : d) {
        const auto it = m.find(a);
        if (it == m.end() || it->second < k) {
            return false;
        }
    }
    return true;
}

Monomial quotient(const Monomial &m, const Monomial &d)
{
    Monomial q = m;
    for (const auto &[a, k] : d) {
        if ((q[a] -= k) == 0) {
            q.erase(a);
        }
    }
    return q;
}

Monomial product(const Monomial &a, const Monomial &b)
{
    Monomial r = a;
    for (const auto &[x, k] : b) {
        r[x] += k;
    }
    return r;
}

} // namespace

bool MonomialLess::operator()(const Monomial &a, const Monomial &b) const
{
    const int da = total_degree(a);
    const int db = total_degree(b);
    if (da != db) {
        return da < db;
    }
    // Lexicographic on exponent vectors, atoms in canonical order.
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        int c;
        if (ia == a.end()) {
            c = 1;
        } else if (ib == b.end()) {
            c = -1;
        } else {
            c = compare(ia->first, ib->first);
        }
        if (c < 0) {
            return false; // a has a positive exponent on an atom b lacks
        }
        if (c > 0) {
            return true;
        }
        if (ia->second != ib->second) {
            return ia->second < ib->second;
        }
        ++ia;
        ++ib;
    }
    return false;
}

Poly::Poly(const Rational &c)
{
    if (!c.is_zero()) {
        terms_[Monomial{}] = c;
    }
}

void Poly::add_term(const Monomial &m, const Rational &c)
{
    if (c.is_zero()) {
        return;
    }
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) {
        terms_.erase(it);
    }
}

Poly Poly::atom(const Expr &a)
{
    Poly p;
    p.terms_[Monomial{{a, 1}}] = Rational(1);
    return p;
}

Poly Poly::from_expr(const Expr &e)
{
    Poly p;
    for (const auto &t : terms_of(e)) {
        auto [c, rest] = split_coefficient(t);
        Monomial m;
        for (const auto &f : factors_of(rest)) {
            if (f.is_number()) {
                continue;
            }
            if (f.kind() == Kind::power && f.exponent().is_integer() && f.exponent().value().sign() > 0) {
                if (const auto k = f.exponent().value().to_int(); k && *k < 100000) {
                    m[f.base()] += static_cast<int>(*k);
                    continue;
                }
            }
            m[f] += 1;
        }
        p.add_term(m, c);
    }
    return p;
}

Expr Poly::to_expr() const
{
    std::vector<Expr> terms;
    for (const auto &[m, c] : terms_) {
        std::vector<Expr> fs{num(c)};
        for (const auto &[a, k] : m) {
            fs.push_back(kmn::pow(a, Expr(k)));
        }
        terms.push_back(mul(std::move(fs)));
    }
    return add(std::move(terms));
}

bool Poly::is_constant() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Poly::constant_value() const
{
    if (terms_.empty()) {
        return Rational(0);
    }
    return terms_.begin()->second;
}

int Poly::degree() const
{
    return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first);
}

std::pair<Monomial, Rational> Poly::leading_term() const
{
    return *terms_.rbegin();
}

std::optional<Poly> Poly::divide_exact(const Poly &d) const
{
    if (d.is_zero()) {
        throw DivisionByZeroError("polynomial division by zero");
    }
    Poly r = *this;
    Poly q;
    const auto [dm, dc] = d.leading_term();
    while (!r.is_zero()) {
        const auto [rm, rc] = r.leading_term();
        if (!divides(dm, rm)) {
            return std::nullopt;
        }
        Poly t;
        t.terms_[quotient(rm, dm)] = rc / dc;
        q += t;
        r -= t * d;
    }
    return q;
}

Rational Poly::content() const
{
    if (terms_.empty()) {
        return Rational(1);
    }
    BigInt g = 0;
    BigInt l = 1;
    for (const auto &[m, c] : terms_) {
        g = gcd(g, c.numerator());
        l = lcm(l, c.denominator());
    }
    return Rational(abs(g), l);
}

Monomial Poly::monomial_content() const
{
    if (terms_.empty()) {
        return {};
    }
    Monomial g = terms_.begin()->first;
    for (const auto &[m, c] : terms_) {
        for (auto it = g.begin(); it != g.end();) {
            const auto f = m.find(it->first);
            if (f == m.end()) {
                it = g.erase(it);
            } else {
                it->second = std::min(it->second, f->second);
                ++it;
            }
        }
    }
    return g;
}

Poly Poly::divide_monomial(const Monomial &d) const
{
    Poly r;
    for (const auto &[m, c] : terms_) {
        r.terms_[quotient(m, d)] = c;
    }
    return r;
}

Poly &Poly::operator+=(const Poly &o)
{
    for (const auto &[m, c] : o.terms_) {
        add_term(m, c);
    }
    return *this;
}

Poly &Poly::operator-=(const Poly &o)
{
    for (const auto &[m, c] : o.terms_) {
        add_term(m, -c);
    }
    return *this;
}

Poly &Poly::operator*=(const Poly &o)
{
    Poly r;
    for (const auto &[m1, c1] : terms_) {
        for (const auto &[m2, c2] : o.terms_) {
            r.add_term(product(m1, m2), c1 * c2);
        }
    }
    *this = std::move(r);
    return *this;
}

Poly Poly::pow(int k) const
{
    Poly r(Rational(1));
    for (int i = 0; i < k; ++i) {
        r *= *this;
    }
    return r;
}

Poly Poly::scaled(const Rational &c) const
{
    Poly r;
    for (const auto &[m, v] : terms_) {
        r.add_term(m, v * c);
    }
    return r;
}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den))
{
    normalize();
}

void RatFunc::normalize()
{
    if (den_.is_zero()) {
        throw DivisionByZeroError("rational function with zero denominator");
    }
    if (num_.is_zero()) {
        den_ = Poly(Rational(1));
        return;
    }
    if (den_.is_constant()) {
        num_ = num_.scaled(den_.constant_value().inverse());
        den_ = Poly(Rational(1));
        return;
    }
    if (auto q = num_.divide_exact(den_)) {
        num_ = std::move(*q);
        den_ = Poly(Rational(1));
        return;
    }
    const Monomial nm = num_.monomial_content();
    const Monomial dm = den_.monomial_content();
    Monomial common;
    for (const auto &[a, k] : nm) {
        if (const auto it = dm.find(a); it != dm.end()) {
            common[a] = std::min(k, it->second);
        }
    }
    if (!common.empty()) {
        num_ = num_.divide_monomial(common);
        den_ = den_.divide_monomial(common);
    }
    if (!num_.is_constant()) {
        if (auto q = den_.divide_exact(num_)) {
            den_ = std::move(*q);
            num_ = Poly(Rational(1));
        }
    }
    Rational c = den_.content();
    if (den_.leading_term().second.is_negative()) {
        c = -c;
    }
    num_ = num_.scaled(c.inverse());
    den_ = den_.scaled(c.inverse());
    if (den_.is_constant()) {
        num_ = num_.scaled(den_.constant_value().inverse());
        den_ = Poly(Rational(1));
    }
}

namespace
{

RatFunc rf_of_factor(const Expr &f)
{
    if (f.kind() == Kind::power && f.exponent().is_integer()) {
        const auto k = f.exponent().value().to_int();
        if (k && *k != 0 && *k > -1000 && *k < 1000) {
            RatFunc b = RatFunc::from_expr(f.base());
            RatFunc r(Rational(1));
            for (std::int64_t i = 0; i < (*k > 0 ? *k : -*k); ++i) {
                r *= b;
            }
            return *k > 0 ? r : RatFunc(Rational(1)) / r;
        }
    }
    return RatFunc(Poly::atom(f), Poly(Rational(1)));
}

} // namespace

RatFunc RatFunc::from_expr(const Expr &e)
{
    if (e.kind() != Kind::sum && e.kind() != Kind::product && e.kind() != Kind::power) {
        if (e.is_number()) {
            return RatFunc(e.value());
        }
        return RatFunc(Poly::atom(e), Poly(Rational(1)));
    }
    RatFunc total;
    for (const auto &t : terms_of(e)) {
        auto [c, rest] = split_coefficient(t);
        RatFunc term(c);
        for (const auto &f : factors_of(rest)) {
            if (!f.is_number()) {
                term *= rf_of_factor(f);
            }
        }
        total += term;
    }
    return total;
}

bool RatFunc::is_constant() const
{
    return num_.is_constant() && den_.is_constant();
}

Expr RatFunc::to_expr() const
{
    if (den_.is_constant()) {
        return num_.scaled(den_.constant_value().inverse()).to_expr();
    }
    return num_.to_expr() * kmn::pow(den_.to_expr(), Expr(-1));
}

RatFunc &RatFunc::operator+=(const RatFunc &o)
{
    if (den_ == o.den_) {
        num_ += o.num_;
    } else {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ *= o.den_;
    }
    normalize();
    return *this;
}

RatFunc &RatFunc::operator-=(const RatFunc &o)
{
    return *this += -o;
}

RatFunc &RatFunc::operator*=(const RatFunc &o)
{
    num_ *= o.num_;
    den_ *= o.den_;
    normalize();
    return *this;
}

RatFunc &RatFunc::operator/=(const RatFunc &o)
{
    if (o.is_zero()) {
        throw DivisionByZeroError("rational function division by zero");
    }
    num_ *= o.den_;
    den_ *= o.num_;
    normalize();
    return *this;
}

bool rational_equal(const Expr &a, const Expr &b)
{
    if (a == b) {
        return true;
    }
    return (RatFunc::from_expr(a) - RatFunc::from_expr(b)).is_zero();
}

std::vector<std::vector<RatFunc>> nullspace(std::vector<std::vector<RatFunc>> rows, std::size_t ncols)
{
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < ncols && rank < rows.size(); ++col) {
        std::optional<std::size_t> best;
        auto cost = [&](const RatFunc &f) {
            return f.is_constant() ? -1 : f.num().degree() + f.den().degree();
        };
        for (std::size_t r = rank; r < rows.size(); ++r) {
            if (rows[r][col].is_zero()) {
                continue;
            }
            if (!best || cost(rows[r][col]) < cost(rows[*best][col])) {
                best = r;
            }
        }
        if (!best) {
            continue;
        }
        std::swap(rows[rank], rows[*best]);
        const RatFunc p = rows[rank][col];
        for (auto &v : rows[rank]) {
            v /= p;
        }
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col].is_zero()) {
                continue;
            }
            const RatFunc f = rows[r][col];
            for (std::size_t c = 0; c < ncols; ++c) {
                rows[r][c] -= f * rows[rank][c];
            }
        }
        pivot_cols.push_back(col);
        ++rank;
    }
    std::vector<std::vector<RatFunc>> basis;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) {
            continue;
        }
        std::vector<RatFunc> v(ncols);
        v[free] = RatFunc(Rational(1));
        for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
            v[pivot_cols[r]] = -rows[r][free];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace kmn
