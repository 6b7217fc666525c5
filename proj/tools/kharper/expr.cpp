#include "kharper/expr.hpp"

#include "kharper/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

namespace kharper::cli {

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    double parse()
    {
        const double v = expression();
        skip_space();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        if (!std::isfinite(v))
            fail("result is not finite");
        return v;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw InvalidArgument("cannot evaluate '" + std::string(text_) + "': " + what +
                              " at position " + std::to_string(pos_));
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek()
    {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    // A factor can start here, so juxtaposition means multiplication.
    bool starts_factor()
    {
        const char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' ||
               std::isalpha(static_cast<unsigned char>(c));
    }

    double expression()
    {
        double v = term();
        for (;;) {
            const char c = peek();
            if (c == '+') {
                ++pos_;
                v += term();
            } else if (c == '-') {
                ++pos_;
                v -= term();
            } else {
                return v;
            }
        }
    }

    double term()
    {
        double v = unary();
        for (;;) {
            const char c = peek();
            if (c == '*') {
                ++pos_;
                v *= unary();
            } else if (c == '/') {
                ++pos_;
                const double d = unary();
                if (d == 0.0)
                    fail("division by zero");
                v /= d;
            } else if (starts_factor()) {
                v *= primary();
            } else {
                return v;
            }
        }
    }

    double unary()
    {
        const char c = peek();
        if (c == '-') {
            ++pos_;
            return -unary();
        }
        if (c == '+') {
            ++pos_;
            return unary();
        }
        return primary();
    }

    double primary()
    {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            const double v = expression();
            if (peek() != ')')
                fail("missing ')'");
            ++pos_;
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            const std::string_view name = text_.substr(start, pos_ - start);
            if (name == "pi")
                return std::numbers::pi;
            pos_ = start;
            fail("unknown name '" + std::string(name) + "'");
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            const char* first = text_.data() + pos_;
            const auto [end, ec] = std::from_chars(first, text_.data() + text_.size(), v);
            if (ec != std::errc())
                fail("malformed number");
            pos_ += static_cast<std::size_t>(end - first);
            return v;
        }
        fail(c == '\0' ? std::string("unexpected end of input") : "unexpected '" + std::string(1, c) + "'");
    }
};

} // namespace

double evaluate_expression(std::string_view text)
{
    return Parser(text).parse();
}

} // namespace kharper::cli
