#pragma once

#include "ncdr/word.hpp"

#include <stdexcept>
#include <vector>

namespace ncdr {

struct AlgebraPresentation {
    GeneratorSet gens;
    std::vector<NCPoly> relations;
    int degree_cap = 0;
    int param_letter = -1; // optional free parameter index (deformation backend)

    bool homogeneous() const {
        for (const auto& r : relations) {
            int w = -1;
            for (const auto& [word, c] : r.terms) {
                int ww = gens.weight_of_word(word);
                if (w < 0) w = ww;
                else if (w != ww) return false;
            }
        }
        return true;
    }
};

struct RewriteRule {
    Word lhs;
    NCPoly rhs; // only words strictly smaller than lhs
};

class RewriteSystem {
public:
    GeneratorSet gens;
    int param_letter = -1;
    std::vector<RewriteRule> rules;

    MonomialOrder order() const { return {&gens, param_letter}; }
    int completion_cap = 0;
    bool confluent_below_cap = true;
    std::vector<Word> unresolved_overlaps;

    // Single pass: rewrite the leftmost occurrence of the first matching rule
    // in each word. Returns true if anything changed.
    bool reduce_step(NCPoly& p) const;
    NCPoly reduce(const NCPoly& p) const;
    bool is_normal(const Word& w) const;
};

struct RewriteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Diamond-lemma completion of the presentation's relations up to the weight
// cap. Overlap ambiguities whose superposition word exceeds the cap are
// recorded as unresolved.
RewriteSystem complete_rewrite(const AlgebraPresentation& pres);

} // namespace ncdr
