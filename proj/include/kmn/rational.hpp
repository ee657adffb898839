#ifndef KMN_RATIONAL_HPP
#define KMN_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace kmn
{

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational
{
public:
    Rational() = default;
    Rational(std::int64_t v) : value_(v) {} // NOLINT(google-explicit-constructor)
    Rational(const BigInt &num, const BigInt &den);
    Rational(std::int64_t num, std::int64_t den) : Rational(BigInt(num), BigInt(den)) {}

    [[nodiscard]] BigInt numerator() const;
    [[nodiscard]] BigInt denominator() const;

    [[nodiscard]] bool is_zero() const;
    [[nodiscard]] bool is_one() const;
    [[nodiscard]] bool is_integer() const;
    [[nodiscard]] bool is_negative() const;
    [[nodiscard]] int sign() const;

    // Integer value if the number is an integer that fits in an int64.
    [[nodiscard]] std::optional<std::int64_t> to_int() const;
    [[nodiscard]] double to_double() const;
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] std::size_t hash() const;

    [[nodiscard]] Rational abs() const;
    [[nodiscard]] Rational inverse() const;
    [[nodiscard]] Rational pow(std::int64_t e) const;

    Rational &operator+=(const Rational &o);
    Rational &operator-=(const Rational &o);
    Rational &operator*=(const Rational &o);
    Rational &operator/=(const Rational &o);

    friend Rational operator+(Rational a, const Rational &b) { return a += b; }
    friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational &b) { return a /= b; }
    friend Rational operator-(const Rational &a);

    friend bool operator==(const Rational &a, const Rational &b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational &a, const Rational &b);

    friend std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.to_string(); }

    // Parses "p", "-p", "p/q" or a finite decimal "1.25" (converted exactly).
    static std::optional<Rational> parse(const std::string &s);

private:
    boost::multiprecision::cpp_rational value_;
};

BigInt gcd(const BigInt &a, const BigInt &b);
BigInt lcm(const BigInt &a, const BigInt &b);

} // namespace kmn

#endif
