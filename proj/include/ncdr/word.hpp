#pragma once

#include "ncdr/rational.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace ncdr {

// A word in the free algebra: sequence of generator indices, one byte each.
// The empty word is the unit.
using Word = std::string;

struct GeneratorSet {
    std::vector<std::string> names;
    std::vector<int> weights; // strictly positive

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        return -1;
    }
    int weight_of_word(const Word& w) const {
        int s = 0;
        for (unsigned char c : w) s += weights[c];
        return s;
    }
    std::string word_str(const Word& w) const {
        if (w.empty()) return "1";
        std::string out;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) out += "*";
            out += names[static_cast<unsigned char>(w[i])];
        }
        return out;
    }
};

// Monomial order: total weight first, then left-to-right generator index.
// With positive weights the lexicographic comparison of equal-weight words
// never hits the prefix case, so plain byte order is a genuine tiebreak.
// An optional distinguished letter (the free deformation parameter) sorts
// words with more occurrences of it strictly lower at equal weight, so
// completed rewriting keeps parameter-free leading words.
struct MonomialOrder {
    const GeneratorSet* gens;
    int param_letter = -1;

    bool less(const Word& a, const Word& b) const {
        int wa = gens->weight_of_word(a), wb = gens->weight_of_word(b);
        if (wa != wb) return wa < wb;
        if (param_letter >= 0) {
            auto count = [&](const Word& w) {
                return std::count(w.begin(), w.end(), static_cast<char>(param_letter));
            };
            auto ca = count(a), cb = count(b);
            if (ca != cb) return ca > cb;
        }
        return a < b;
    }
};

inline bool word_less(const GeneratorSet& g, const Word& a, const Word& b) {
    return MonomialOrder{&g}.less(a, b);
}

// Noncommutative polynomial: finite Rat-linear combination of words.
class NCPoly {
public:
    std::map<Word, Rat> terms;

    NCPoly() = default;
    static NCPoly unit() {
        NCPoly p;
        p.terms[Word()] = 1;
        return p;
    }
    static NCPoly word(const Word& w, const Rat& c = 1) {
        NCPoly p;
        if (!is_zero(c)) p.terms[w] = c;
        return p;
    }
    bool zero() const { return terms.empty(); }

    void add(const Word& w, const Rat& c) {
        if (is_zero(c)) return;
        auto it = terms.find(w);
        if (it == terms.end()) {
            terms.emplace(w, c);
        } else {
            it->second += c;
            if (is_zero(it->second)) terms.erase(it);
        }
    }
    NCPoly& operator+=(const NCPoly& o) {
        for (auto& [w, c] : o.terms) add(w, c);
        return *this;
    }
    NCPoly& operator-=(const NCPoly& o) {
        for (auto& [w, c] : o.terms) add(w, -c);
        return *this;
    }
    NCPoly& operator*=(const Rat& c) {
        if (is_zero(c)) {
            terms.clear();
            return *this;
        }
        for (auto& [w, v] : terms) v *= c;
        return *this;
    }
    friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
    friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
    friend NCPoly operator*(NCPoly a, const Rat& c) { return a *= c; }
    friend NCPoly operator*(const NCPoly& a, const NCPoly& b) {
        NCPoly r;
        for (auto& [u, cu] : a.terms)
            for (auto& [v, cv] : b.terms) r.add(u + v, cu * cv);
        return r;
    }
    bool operator==(const NCPoly& o) const { return terms == o.terms; }

    // Largest word in the monomial order, or nullptr if zero.
    const Word* leading_word(const MonomialOrder& ord) const {
        const Word* best = nullptr;
        for (auto& [w, c] : terms)
            if (!best || ord.less(*best, w)) best = &w;
        return best;
    }
    const Word* leading_word(const GeneratorSet& g) const {
        return leading_word(MonomialOrder{&g});
    }
    std::string str(const GeneratorSet& g) const {
        if (terms.empty()) return "0";
        std::string out;
        bool first = true;
        for (auto& [w, c] : terms) {
            std::string cs = rat_str(c);
            if (!first) out += cs[0] == '-' ? " - " : " + ";
            else if (cs[0] == '-') out += "-";
            std::string mag = cs[0] == '-' ? cs.substr(1) : cs;
            if (w.empty()) out += mag;
            else if (mag == "1") out += g.word_str(w);
            else out += mag + "*" + g.word_str(w);
            first = false;
        }
        return out;
    }
};

} // namespace ncdr
