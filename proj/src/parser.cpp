#include <kmn/parser.hpp>

#include <cctype>
#include <vector>

#include <kmn/calculus.hpp>
#include <kmn/errors.hpp>

namespace kmn
{

namespace
{

enum class Tok { number, ident, op, lparen, rparen, comma, end };

struct Token {
    Tok type;
    std::string text;
    std::size_t col; // 1-based
    int primes = 0;
};

std::vector<Token> tokenize(const std::string &src)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        const std::size_t col = i + 1;
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])) != 0) {
                ++j;
            }
            if (j < src.size() && src[j] == '.') {
                throw ParseError("decimal literals are not allowed in expressions; write p/q", col);
            }
            out.push_back({Tok::number, src.substr(i, j - i), col});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) != 0 || src[j] == '_')) {
                ++j;
            }
            Token t{Tok::ident, src.substr(i, j - i), col};
            while (j < src.size() && src[j] == '\'') {
                ++t.primes;
                ++j;
            }
            out.push_back(t);
            i = j;
            continue;
        }
        switch (c) {
            case '+':
            case '-':
            case '*':
            case '/':
            case '^':
                out.push_back({Tok::op, std::string(1, c), col});
                break;
            case '(':
                out.push_back({Tok::lparen, "(", col});
                break;
            case ')':
                out.push_back({Tok::rparen, ")", col});
                break;
            case ',':
                out.push_back({Tok::comma, ",", col});
                break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", col);
        }
        ++i;
    }
    out.push_back({Tok::end, "", src.size() + 1});
    return out;
}

int infix_power(const Token &t)
{
    if (t.type != Tok::op) {
        return 0;
    }
    switch (t.text[0]) {
        case '+':
        case '-':
            return 10;
        case '*':
        case '/':
            return 20;
        case '^':
            return 30;
        default:
            return 0;
    }
}

constexpr int unary_power = 25;

class Parser
{
public:
    Parser(const std::string &src, const ParseOptions &opts) : toks_(tokenize(src)), opts_(opts) {}

    Expr parse()
    {
        Expr e = expression(0);
        if (peek().type != Tok::end) {
            throw ParseError("unexpected '" + peek().text + "'", peek().col);
        }
        return e;
    }

private:
    const Token &peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_++]; }

    void expect(Tok type, const char *what)
    {
        if (peek().type != type) {
            const auto &t = peek();
            throw ParseError(std::string("expected ") + what + (t.type == Tok::end ? " before end of input" : " but found '" + t.text + "'"),
                             t.col);
        }
        ++pos_;
    }

    Expr expression(int rbp)
    {
        Expr left = prefix();
        while (rbp < infix_power(peek())) {
            const Token op = next();
            switch (op.text[0]) {
                case '+':
                    left = left + expression(10);
                    break;
                case '-':
                    left = left - expression(10);
                    break;
                case '*':
                    left = left * expression(20);
                    break;
                case '/':
                    left = divide(left, expression(20), op.col);
                    break;
                case '^':
                    left = power(left, expression(29), op.col);
                    break;
                default:
                    break;
            }
        }
        return left;
    }

    static Expr divide(const Expr &a, const Expr &b, std::size_t col)
    {
        if (b.is_zero()) {
            throw ParseError("division by zero", col);
        }
        return a / b;
    }

    static Expr power(const Expr &a, const Expr &b, std::size_t col)
    {
        try {
            return pow(a, b);
        } catch (const DivisionByZeroError &) {
            throw ParseError("zero raised to a negative power", col);
        }
    }

    Expr prefix()
    {
        const Token t = next();
        switch (t.type) {
            case Tok::number:
                return num(Rational(BigInt(t.text), BigInt(1)));
            case Tok::ident:
                return identifier(t);
            case Tok::op:
                if (t.text == "-") {
                    return -expression(unary_power);
                }
                if (t.text == "+") {
                    return expression(unary_power);
                }
                throw ParseError("unexpected '" + t.text + "'", t.col);
            case Tok::lparen: {
                Expr e = expression(0);
                expect(Tok::rparen, "')'");
                return e;
            }
            case Tok::end:
                throw ParseError("unexpected end of input", t.col);
            default:
                throw ParseError("unexpected '" + t.text + "'", t.col);
        }
    }

    std::vector<std::pair<Expr, Token>> arguments()
    {
        expect(Tok::lparen, "'('");
        std::vector<std::pair<Expr, Token>> args;
        if (peek().type == Tok::rparen) {
            ++pos_;
            return args;
        }
        while (true) {
            const Token start = peek();
            args.emplace_back(expression(0), start);
            if (peek().type == Tok::comma) {
                ++pos_;
                continue;
            }
            expect(Tok::rparen, "',' or ')'");
            return args;
        }
    }

    static std::string variable_of(const std::pair<Expr, Token> &arg)
    {
        if (!arg.first.is_symbol()) {
            throw ParseError("expected a variable name", arg.second.col);
        }
        return arg.first.name();
    }

    Expr identifier(const Token &t)
    {
        const bool call = peek().type == Tok::lparen;
        if (!call) {
            if (t.primes > 0) {
                throw ParseError("primes are only allowed on function applications", t.col);
            }
            const auto it = opts_.aliases.find(t.text);
            return sym(it == opts_.aliases.end() ? t.text : it->second);
        }
        const auto &name = t.text;
        const bool builtin = name == "diff" || name == "fdiff" || name == "Gamma" || is_builtin_function(name);
        if (!builtin && opts_.functions.count(name) == 0) {
            throw ParseError("unknown function '" + name + "'", t.col);
        }
        if (builtin && t.primes > 0) {
            throw ParseError("primes are not allowed on " + name, t.col);
        }
        auto args = arguments();
        auto arity = [&](std::size_t n) {
            if (args.size() != n) {
                throw ParseError(name + " expects " + std::to_string(n) + " argument(s)", t.col);
            }
        };
        try {
            if (name == "diff") {
                arity(3);
                const auto &k = args[2].first;
                if (!k.is_integer() || k.value().sign() <= 0) {
                    throw ParseError("derivative order must be a positive integer", args[2].second.col);
                }
                return diff(args[0].first, variable_of(args[1]), static_cast<int>(*k.value().to_int()));
            }
            if (name == "fdiff") {
                arity(3);
                return fdiff(args[0].first, variable_of(args[1]), args[2].first);
            }
            if (name == "Gamma") {
                arity(1);
                return gamma(args[0].first);
            }
            std::vector<Expr> vals;
            for (auto &a : args) {
                vals.push_back(a.first);
            }
            if (is_builtin_function(name)) {
                arity(1);
                return func(name, std::move(vals));
            }
            if (t.primes > 0) {
                arity(1);
            }
            return func(name, std::move(vals), t.primes);
        } catch (const UnsupportedError &e) {
            throw ParseError(e.what(), t.col);
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const ParseOptions &opts_;
};

} // namespace

Expr parse_expression(const std::string &src, const ParseOptions &opts)
{
    return Parser(src, opts).parse();
}

} // namespace kmn
