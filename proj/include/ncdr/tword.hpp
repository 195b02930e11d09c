#pragma once

#include "ncdr/algebra.hpp"
#include "ncdr/linalg.hpp"

#include <map>
#include <vector>

namespace ncdr {

// Word a1 t a2 t ... t ar in the free product of the algebra with k[t],
// stored as the basis indices of the slots between the t's.
using TWord = std::vector<int>;

struct TElem {
    std::map<TWord, Rat> terms;
    bool zero() const { return terms.empty(); }
    bool operator==(const TElem& o) const { return terms == o.terms; }
    void add(const TWord& w, const Rat& c) {
        if (c == 0) return;
        Rat& r = terms[w];
        r += c;
        if (r == 0) terms.erase(w);
    }
    TElem operator+(const TElem& o) const;
    TElem operator-(const TElem& o) const;
};

inline TElem TElem::operator+(const TElem& o) const {
    TElem out = *this;
    for (const auto& [w, c] : o.terms) out.add(w, c);
    return out;
}

inline TElem TElem::operator-(const TElem& o) const {
    TElem out = *this;
    for (const auto& [w, c] : o.terms) out.add(w, -c);
    return out;
}

// u t v: concatenation of slot lists, extended bilinearly.
TElem t_concat(const TElem& u, const TElem& v);

// Leibniz extension of a linear map f (square matrix in the algebra basis,
// unit column zero) to words: sum over slots of the word with one slot
// pushed through f. When fdeg is odd the term for slot k carries the sign
// (-1)^(weights of the slots before k); requires a graded algebra then.
// Throws std::invalid_argument if f does not kill the unit.
TElem extend_t(const FinDimAlgebra& A, const Mat& f, const TElem& w, int fdeg = 0);

} // namespace ncdr
