#pragma once

#include "ncdr/forms.hpp"

#include <map>
#include <string>
#include <vector>

namespace ncdr {

// A cyclic tensor word: an ordered tuple of form slots, identified up to
// cyclic rotation with the graded Koszul sign for the slot degrees.
using ExtWord = std::vector<FormKey>;

inline int ext_degree(const ExtWord& w) {
    int d = 0;
    for (const auto& s : w) d += static_cast<int>(s.size()) - 1;
    return d;
}

// Linear combination of cyclic tensor words, stored on the canonical
// (lexicographically minimal) rotation of each word.
struct ExtendedPiece {
    std::map<ExtWord, Rat> terms;
    bool zero() const { return terms.empty(); }
    bool operator==(const ExtendedPiece& o) const { return terms == o.terms; }
    ExtendedPiece operator+(const ExtendedPiece& o) const;
    ExtendedPiece operator-(const ExtendedPiece& o) const;
};

class ExtendedOps {
public:
    explicit ExtendedOps(const FinDimAlgebra& A) : A_(&A), ops_(A) {}

    // Accumulates c times the canonical signed representative of the cyclic
    // class of w. A class equal to minus itself vanishes rationally.
    void add(ExtendedPiece& out, const ExtWord& w, const Rat& c) const;

    ExtendedPiece piece(const ExtWord& w, const Rat& c = Rat(1)) const;

    // Slotwise differential, extended across slots with Koszul signs.
    ExtendedPiece d(const ExtendedPiece& x) const;

    // Contraction with the distinguished derivation: cuts each slot at each
    // of its differential positions into a pair of adjacent slots.
    ExtendedPiece i_delta(const ExtendedPiece& x) const;

    // Multiplies the slots of every word back into a single form of the
    // common degree. Well defined against the cyclic identifications only
    // modulo the commutator subspace of the form space.
    Form reclose(const ExtendedPiece& x) const;

    std::string str(const ExtendedPiece& x) const;

private:
    const FinDimAlgebra* A_;
    FormOps ops_;
};

} // namespace ncdr
