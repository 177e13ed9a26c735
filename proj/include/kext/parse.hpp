#pragma once

// Element grammar shared by every ring and by the polynomial-system files:
//
//   expr   := ["-"] term { ("+" | "-") term }
//   term   := factor { "*" factor }
//   factor := int [ "/" posint ] | ident [ "^" posint ]
//
// Whitespace is insignificant anywhere. Parsing yields raw terms with
// rational coefficients; the owning ring maps them to a canonical element.

#include "kext/error.hpp"
#include "kext/numeric.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kext {

struct RawTerm {
    BigRat coef{1};
    std::vector<std::pair<std::string, unsigned>> powers;
};

using RawPoly = std::vector<RawTerm>;

namespace detail {

class ElementParser {
public:
    explicit ElementParser(std::string_view text)
    {
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (std::isspace(static_cast<unsigned char>(text[i]))) continue;
            chars_.push_back(text[i]);
            origin_.push_back(i);
        }
        end_position_ = text.size();
    }

    RawPoly parse()
    {
        RawPoly out;
        if (chars_.empty()) throw SyntaxError(0, "empty element");
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            ++pos_;
        }
        for (;;) {
            RawTerm t = term();
            if (negative) t.coef = -t.coef;
            out.push_back(std::move(t));
            if (at_end()) break;
            char c = peek();
            if (c == '+') negative = false;
            else if (c == '-') negative = true;
            else throw SyntaxError(position(), std::string("unexpected '") + c + "'");
            ++pos_;
        }
        return out;
    }

private:
    bool at_end() const { return pos_ >= chars_.size(); }
    char peek() const { return chars_[pos_]; }
    std::size_t position() const { return pos_ < origin_.size() ? origin_[pos_] : end_position_; }

    RawTerm term()
    {
        RawTerm t;
        factor(t);
        while (!at_end() && peek() == '*') {
            ++pos_;
            factor(t);
        }
        return t;
    }

    BigInt digits()
    {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) throw SyntaxError(position(), "expected digits");
        return BigInt(std::string(chars_.begin() + static_cast<long>(start), chars_.begin() + static_cast<long>(pos_)));
    }

    void factor(RawTerm& t)
    {
        if (at_end()) throw SyntaxError(position(), "unexpected end of input");
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            BigInt n = digits();
            BigRat v(n);
            if (!at_end() && peek() == '/') {
                ++pos_;
                std::size_t where = position();
                BigInt d = digits();
                if (d == 0) throw SyntaxError(where, "zero denominator");
                v = BigRat(n, d);
            }
            t.coef *= v;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
            std::string name(chars_.begin() + static_cast<long>(start), chars_.begin() + static_cast<long>(pos_));
            unsigned e = 1;
            if (!at_end() && peek() == '^') {
                ++pos_;
                std::size_t where = position();
                BigInt v = digits();
                if (v == 0 || v > 65535) throw SyntaxError(where, "exponent must be in 1..65535");
                e = static_cast<unsigned>(v);
            }
            t.powers.emplace_back(std::move(name), e);
            return;
        }
        throw SyntaxError(position(), std::string("unexpected '") + c + "'");
    }

    std::vector<char> chars_;
    std::vector<std::size_t> origin_;
    std::size_t end_position_ = 0;
    std::size_t pos_ = 0;
};

} // namespace detail

inline RawPoly parse_raw(std::string_view text) { return detail::ElementParser(text).parse(); }

} // namespace kext
