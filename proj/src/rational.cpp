#include <kmn/rational.hpp>

#include <cctype>
#include <limits>
#include <stdexcept>

#include <boost/functional/hash.hpp>
#include <boost/multiprecision/integer.hpp>

#include <kmn/errors.hpp>

namespace kmn
{

Rational::Rational(const BigInt &num, const BigInt &den)
{
    if (den == 0) {
        throw DivisionByZeroError("rational with zero denominator");
    }
    if (den < 0) {
        value_ = boost::multiprecision::cpp_rational(-num, -den);
    } else {
        value_ = boost::multiprecision::cpp_rational(num, den);
    }
}

BigInt Rational::numerator() const
{
    return boost::multiprecision::numerator(value_);
}

BigInt Rational::denominator() const
{
    return boost::multiprecision::denominator(value_);
}

bool Rational::is_zero() const
{
    return value_ == 0;
}

bool Rational::is_one() const
{
    return value_ == 1;
}

bool Rational::is_integer() const
{
    return denominator() == 1;
}

bool Rational::is_negative() const
{
    return value_ < 0;
}

int Rational::sign() const
{
    return value_ < 0 ? -1 : (value_ > 0 ? 1 : 0);
}

std::optional<std::int64_t> Rational::to_int() const
{
    if (!is_integer()) {
        return std::nullopt;
    }
    const auto n = numerator();
    if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min()) {
        return std::nullopt;
    }
    return static_cast<std::int64_t>(n);
}

double Rational::to_double() const
{
    return value_.convert_to<double>();
}

std::string Rational::to_string() const
{
    if (is_integer()) {
        return numerator().str();
    }
    return numerator().str() + "/" + denominator().str();
}

std::size_t Rational::hash() const
{
    constexpr std::int64_t modulus = 2305843009213693951LL; // 2^61 - 1
    std::size_t seed = static_cast<std::size_t>(static_cast<std::int64_t>(numerator() % modulus));
    boost::hash_combine(seed, static_cast<std::size_t>(static_cast<std::int64_t>(denominator() % modulus)));
    return seed;
}

Rational Rational::abs() const
{
    return is_negative() ? -*this : *this;
}

Rational Rational::inverse() const
{
    if (is_zero()) {
        throw DivisionByZeroError("inverse of zero");
    }
    return Rational(denominator(), numerator());
}

Rational Rational::pow(std::int64_t e) const
{
    if (e < 0) {
        return inverse().pow(-e);
    }
    const auto ue = static_cast<unsigned>(e);
    return Rational(boost::multiprecision::pow(numerator(), ue), boost::multiprecision::pow(denominator(), ue));
}

Rational &Rational::operator+=(const Rational &o)
{
    value_ += o.value_;
    return *this;
}

Rational &Rational::operator-=(const Rational &o)
{
    value_ -= o.value_;
    return *this;
}

Rational &Rational::operator*=(const Rational &o)
{
    value_ *= o.value_;
    return *this;
}

Rational &Rational::operator/=(const Rational &o)
{
    if (o.is_zero()) {
        throw DivisionByZeroError("rational division by zero");
    }
    value_ /= o.value_;
    return *this;
}

Rational operator-(const Rational &a)
{
    Rational r;
    r.value_ = -a.value_;
    return r;
}

std::strong_ordering operator<=>(const Rational &a, const Rational &b)
{
    if (a.value_ < b.value_) {
        return std::strong_ordering::less;
    }
    if (a.value_ > b.value_) {
        return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

std::optional<Rational> Rational::parse(const std::string &s)
{
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        neg = s[i] == '-';
        ++i;
    }
    auto digits = [&](std::string &out) {
        const auto start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])) != 0) {
            out.push_back(s[i++]);
        }
        return i > start;
    };
    std::string whole;
    if (!digits(whole)) {
        return std::nullopt;
    }
    Rational r(BigInt(whole), BigInt(1));
    if (i < s.size() && s[i] == '.') {
        ++i;
        std::string frac;
        digits(frac);
        if (!frac.empty()) {
            BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
            r += Rational(BigInt(frac), scale);
        }
    } else if (i < s.size() && s[i] == '/') {
        ++i;
        std::string den;
        if (!digits(den) || BigInt(den) == 0) {
            return std::nullopt;
        }
        r = Rational(BigInt(whole), BigInt(den));
    }
    if (i != s.size()) {
        return std::nullopt;
    }
    return neg ? -r : r;
}

BigInt gcd(const BigInt &a, const BigInt &b)
{
    return boost::multiprecision::gcd(a, b);
}

BigInt lcm(const BigInt &a, const BigInt &b)
{
    if (a == 0 || b == 0) {
        return 0;
    }
    return boost::multiprecision::lcm(a, b);
}

} // namespace kmn
