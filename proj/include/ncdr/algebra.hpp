#pragma once

#include "ncdr/linalg.hpp"
#include "ncdr/rewrite.hpp"

#include <string>
#include <vector>

namespace ncdr {

// Sparse coordinate vector over an algebra basis, sorted by index.
using SparseVec = std::vector<std::pair<int, Rat>>;

void sv_add(SparseVec& dst, const SparseVec& src, const Rat& coeff = 1);
SparseVec sv_scale(const SparseVec& v, const Rat& c);
inline SparseVec sv_unit(int i, const Rat& c = 1) { return {{i, c}}; }
RatVec sv_dense(const SparseVec& v, int dim);
SparseVec sv_from_dense(const RatVec& v);

struct SizeLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Basis-and-structure-constants algebra, either materialized from a rewriting
// system at a weight cap or supplied directly. basis[0] is always the unit.
class FinDimAlgebra {
public:
    GeneratorSet gens; // empty for raw structure-constant input
    std::vector<Word> basis_words;
    std::vector<std::string> names;
    std::vector<int> weights; // per basis element; empty when ungraded
    bool graded = false;
    bool truncated = false;
    int cap = 0; // weight cap when truncated/graded, else 0
    RewriteSystem rs;
    bool word_backed = false;

    int dim() const { return static_cast<int>(names.size()); }
    const SparseVec& mul(int i, int j) const { return table_[i][j]; }
    SparseVec mul(const SparseVec& x, const SparseVec& y) const;
    int weight(int i) const { return graded ? weights[i] : -1; }
    int max_weight() const;

    int index_of_word(const Word& w) const; // -1 if absent
    // Reduce an arbitrary polynomial to coordinates; words beyond the cap
    // truncate to zero (word backend only).
    SparseVec coords(const NCPoly& p) const;
    std::string element_str(const SparseVec& v) const;

    void set_table(std::vector<std::vector<SparseVec>> t) { table_ = std::move(t); }
    // Unit laws and associativity (exact when not truncated; modulo the cap
    // ideal otherwise). Throws on violation.
    void check_axioms() const;

private:
    std::vector<std::vector<SparseVec>> table_;
    std::map<Word, int> word_index_;
    friend FinDimAlgebra build_findim(const AlgebraPresentation&, int);
    friend FinDimAlgebra algebra_from_structure_constants(
        const std::vector<std::string>&, const std::vector<std::tuple<int, int, int, Rat>>&);
};

// Materialize normal-form words of weight <= cap with the truncation
// semantics: products of weight > cap map to 0.
FinDimAlgebra build_findim(const AlgebraPresentation& pres, int cap);

FinDimAlgebra algebra_from_structure_constants(
    const std::vector<std::string>& basis_names,
    const std::vector<std::tuple<int, int, int, Rat>>& entries);

// Size guard configured by the NCDR_SIZE_LIMIT environment variable.
std::size_t size_limit();

} // namespace ncdr
