#pragma once

#include "ncdr/word.hpp"

#include <cctype>
#include <stdexcept>

namespace ncdr {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Recursive-descent parser for noncommutative polynomial expressions:
//   expr   := term (('+'|'-') term)*
//   term   := ('-')* factor (('*')? factor)*   adjacency means product
//   factor := rational | identifier ('^' integer)? | '(' expr ')'
// Identifiers must name generators of `gens`.
class ExprParser {
public:
    ExprParser(const std::string& src, const GeneratorSet& gens) : s_(src), gens_(gens) {}

    NCPoly parse() {
        NCPoly p = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return p;
    }

private:
    const std::string& s_;
    const GeneratorSet& gens_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("parse error at position " + std::to_string(pos_) + ": " + msg);
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool eat(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }
    bool at_factor_start() {
        skip_ws();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return c == '(' || std::isdigit(static_cast<unsigned char>(c)) ||
               std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }

    NCPoly expr() {
        NCPoly p = term();
        for (;;) {
            if (eat('+')) p += term();
            else if (eat('-')) p -= term();
            else return p;
        }
    }
    NCPoly term() {
        Rat sign = 1;
        while (eat('-')) sign = -sign;
        NCPoly p = factor();
        while (peek('*') || at_factor_start()) {
            eat('*');
            p = p * factor();
        }
        return p * sign;
    }
    NCPoly factor() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NCPoly p = expr();
            if (!eat(')')) fail("expected ')'");
            return maybe_pow(p);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/'))
                ++pos_;
            auto r = parse_rat(s_.substr(start, pos_ - start));
            if (!r) fail("bad rational literal");
            NCPoly p;
            p.add(Word(), *r);
            return maybe_pow(p);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                        s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            int g = gens_.index_of(name);
            if (g < 0) fail("unknown generator '" + name + "'");
            return maybe_pow(NCPoly::word(Word(1, static_cast<char>(g))));
        }
        fail(std::string("unexpected character '") + c + "'");
    }
    NCPoly maybe_pow(NCPoly base) {
        if (!eat('^')) return base;
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected integer exponent");
        int e = std::stoi(s_.substr(start, pos_ - start));
        NCPoly p = NCPoly::unit();
        for (int i = 0; i < e; ++i) p = p * base;
        return p;
    }
};

inline NCPoly parse_poly(const std::string& src, const GeneratorSet& gens) {
    return ExprParser(src, gens).parse();
}

} // namespace ncdr
