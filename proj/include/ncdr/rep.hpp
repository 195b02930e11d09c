#pragma once

#include "ncdr/extended.hpp"
#include "ncdr/spaces.hpp"

#include <map>
#include <string>
#include <vector>

namespace ncdr {

// Commutative polynomial differential form on the representation space of a
// free algebra. Even variables are the matrix entries of the generic images
// of the generators plus one coordinate per entry of the Lie algebra factor
// (the latter carry degree 2 and no differentials); odd variables are the
// differentials of the generator entries.
struct CommForm {
    // key: (sorted multiset of even variable ids, strictly increasing odd ids)
    using Key = std::pair<std::vector<int>, std::vector<int>>;
    std::map<Key, Rat> terms;

    bool zero() const { return terms.empty(); }
    bool operator==(const CommForm& o) const { return terms == o.terms; }
    void add(const Key& k, const Rat& c);
    CommForm operator+(const CommForm& o) const;
    CommForm operator-(const CommForm& o) const;
    CommForm scaled(const Rat& c) const;
    static CommForm one() {
        CommForm f;
        f.add({{}, {}}, 1);
        return f;
    }
};

// Variable bookkeeping and the calculus on CommForm for a fixed matrix size
// and number of free generators.
class RepCtx {
public:
    RepCtx(int dim_v, int num_gens) : dv(dim_v), ng(num_gens) {}

    int dv, ng;
    int xvar(int a, int i, int j) const { return (a * dv + i) * dv + j; }
    int gvar(int i, int j) const { return ng * dv * dv + i * dv + j; }
    bool is_gvar(int v) const { return v >= ng * dv * dv; }

    CommForm mul(const CommForm& l, const CommForm& r) const;
    // de Rham differential; the Lie-algebra coordinates are constants.
    CommForm d(const CommForm& f) const;
    // Contraction along the conjugation vector field of the elementary
    // matrix e_{kl}: i(d xhat) = [e, xhat] entrywise.
    CommForm contract(int k, int l, const CommForm& f) const;
    CommForm lie(int k, int l, const CommForm& f) const; // Cartan formula
    // Equivariant piece: sum over the elementary basis of the contraction
    // times the dual linear coordinate.
    CommForm d_g(const CommForm& f) const;
    bool is_basic(const CommForm& f) const;
    std::string str(const CommForm& f) const;
};

// dv x dv matrix with CommForm entries, row-major.
using MatForm = std::vector<CommForm>;

MatForm mat_identity(const RepCtx& c);
MatForm mat_mul(const RepCtx& c, const MatForm& l, const MatForm& r);
MatForm mat_add(const MatForm& l, const MatForm& r);
MatForm mat_d(const RepCtx& c, const MatForm& m);
CommForm mat_trace(const RepCtx& c, const MatForm& m);

// Evaluation of a free algebra (optionally with one distinguished parameter
// letter mapped to the generic Lie-algebra coordinate matrix) into matrix
// valued polynomial forms.
class RepEval {
public:
    // t_letter: generator index sent to the coordinate matrix, -1 for none.
    RepEval(const FinDimAlgebra& A, int dim_v, int t_letter = -1);

    const RepCtx& ctx() const { return ctx_; }
    MatForm coordinate_matrix() const; // the image of the parameter letter

    MatForm ev(const Word& w) const;
    MatForm ev(const SparseVec& v) const;
    MatForm ev(const NCPoly& p) const;
    // a0 da1 ... dan as a product of generic matrices and their entrywise
    // differentials.
    MatForm ev_omega(const Form& f) const;
    CommForm trace_ev(const Form& f) const;
    // Cyclic slot words: the coordinate matrix is inserted after each slot.
    CommForm trace_ev(const ExtendedPiece& x) const;

private:
    MatForm ev_key(const FormKey& k) const;
    const FinDimAlgebra* A_;
    RepCtx ctx_;
    int t_;
};

struct RepThmReport {
    int dim_v = 0;
    int morphism_pairs = 0;      // multiplicativity of the evaluation
    int commutator_samples = 0;  // trace kills graded commutators
    int equivariant_samples = 0; // trace of (d + contraction) vs d_DR + d_g
    int homology_samples = 0;    // kernel classes: basic, B -> (N+1) d_DR
    bool morphism_ok = true;
    bool commutator_ok = true;
    bool equivariant_ok = true;
    bool homology_ok = true;
    bool basic_ok = true;
    std::string witness;
    bool ok() const {
        return morphism_ok && commutator_ok && equivariant_ok && homology_ok && basic_ok;
    }
};

// Desk-scale verification over the free algebra on {x, y}: evaluation is
// multiplicative, the trace kills commutators and is rotation invariant, the
// equivariant square commutes on slot words of low degree, and contraction
// kernel classes map to basic forms intertwining the cyclic differential
// with (degree + 1) times de Rham.
RepThmReport verify_rep_thm(int dim_v, int cap, int max_degree = 2, int max_slots = 2);

} // namespace ncdr
