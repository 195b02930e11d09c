#pragma once

#include "ncdr/spaces.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ncdr {

// Normal form for a relative differential form over a one-variable central
// base: a power of the base variable, at most one factor of its differential
// (two of them cancel in the relative quotient), and a slot word over the
// base-variable-free part of the algebra basis. The slot word is a FormKey
// over the positions of the base-free basis list.
struct RelKey {
    int e = 0;  // power of the base variable
    int dc = 0; // 0 or 1 factors of its differential
    FormKey k;  // a_{s0} d a_{s1} ... d a_{sm} over base-free positions

    bool operator<(const RelKey& o) const {
        if (e != o.e) return e < o.e;
        if (dc != o.dc) return dc < o.dc;
        return k < o.k;
    }
    bool operator==(const RelKey& o) const { return e == o.e && dc == o.dc && k == o.k; }
};

struct RelForm {
    std::map<RelKey, Rat> terms;
    bool zero() const { return terms.empty(); }
    bool operator==(const RelForm& o) const { return terms == o.terms; }
    void add(const RelKey& k, const Rat& c);
    RelForm operator+(const RelForm& o) const;
    RelForm operator-(const RelForm& o) const;
    RelForm scaled(const Rat& c) const;
    // the dc-free part and the dc part with the differential stripped
    RelForm dc_free() const;
    RelForm dc_part() const;
};

// An algebra with one central polynomial parameter, its basis as a free
// module over the parameter, and the calculus of relative forms.
class RelativeFamily {
public:
    // The presentation must contain the central letter (centrality relations
    // included) and be buildable below the cap.
    RelativeFamily(const AlgebraPresentation& pres, int c_letter, int cap);

    const FinDimAlgebra& algebra() const { return A_; }
    const FormOps& forms() const { return ops_; }
    int c_letter() const { return c_; }
    int c_weight() const { return cw_; }
    int cap() const { return cap_; }
    int base_free_count() const { return static_cast<int>(cfree_.size()); }
    int base_free_index(int pos) const { return cfree_[static_cast<std::size_t>(pos)]; }
    int base_free_weight(int pos) const;

    // basis index -> (parameter exponent, base-free position)
    std::pair<int, int> decompose(int idx) const;
    // verified during construction: the decomposition is a bijection
    bool free_over_base() const { return free_ok_; }

    // Projection to the relative quotient in the module normal form, and the
    // canonical section given by the normal-form basis itself.
    RelForm project(const Form& f) const;
    Form lift(const RelForm& x) const;

    RelForm rel_d(const RelForm& x) const;
    RelForm rel_iota(const RelForm& x) const;

    std::string str(const RelForm& x) const;

private:
    Form lift_key(const RelKey& k, const Rat& c) const;
    void project_key(const FormKey& key, const Rat& c, RelForm& out) const;

    FinDimAlgebra A_;
    FormOps ops_;
    int c_ = 0, cw_ = 0, cap_ = 0;
    std::vector<int> cfree_;          // base-free basis indices, in order
    std::map<int, int> cfree_pos_;    // inverse
    std::vector<std::pair<int, int>> decomp_; // per basis index
    std::map<std::pair<int, int>, int> comp_idx_; // inverse of decompose
    bool free_ok_ = false;
};

struct RelCertificate {
    bool free_ok = false;      // A is a free module over the base
    bool section_ok = false;   // project(lift(x)) == x on the slice basis
    bool ideal_killed = false; // commutators with the base (and its dC) die
    bool kernel_stable = false;// ker(project) closed under d and the contraction
    bool square_zero = false;  // induced d and total differential square to zero
    std::string witness;
    bool ok() const {
        return free_ok && section_ok && ideal_killed && kernel_stable && square_zero;
    }
};

// Certify the relative quotient on every form degree <= max_degree of one
// weight slice.
RelCertificate certify_relative(const RelativeFamily& fam, int max_degree, int weight);

// Element of the relative periodic complex: t-power -> dc-free relative
// form; the component at power i has form degree n - 2i for a fixed total
// degree n. At a fixed weight only finitely many powers occur.
struct PerElem {
    std::map<int, RelForm> comp;
    bool zero() const;
    bool operator==(const PerElem& o) const;
    PerElem operator+(const PerElem& o) const;
    PerElem operator-(const PerElem& o) const;
    PerElem scaled(const Rat& c) const;
};

// d + t iota on the relative periodic complex (degree n -> n + 1).
PerElem per_diff(const RelativeFamily& fam, const PerElem& x);

// Basis of the weight-w, degree-n component: (t-power, dc-free key) pairs.
std::vector<std::pair<int, RelKey>> per_basis(const RelativeFamily& fam, int weight, int degree);

// Representative cycles spanning the degree-n homology of the weight slice.
std::vector<PerElem> per_cycles(const RelativeFamily& fam, int weight, int degree);
std::vector<PerElem> per_homology_reps(const RelativeFamily& fam, int weight, int degree);
bool per_is_cycle(const RelativeFamily& fam, const PerElem& x);
bool per_is_boundary(const RelativeFamily& fam, int weight, int degree, const PerElem& x);

struct ConnectionValue {
    PerElem value;         // relative class paired with the base differential
    bool residue_ok = false; // the lifted differential landed in the filtration
};

// Lift-and-project connection: lift the cycle, apply the total differential,
// certify the dc-free part vanishes, return the dc coefficient. An optional
// perturbation (a dc-carrying relative form per t-power) changes the lift.
ConnectionValue gm_connect(const RelativeFamily& fam, const PerElem& cycle,
                           const std::map<int, RelForm>* perturb = nullptr);

// Multiply a periodic element by a power of the base variable.
PerElem per_scale_base(const PerElem& x, int e);

struct GmReport {
    int classes = 0;
    bool lift_independent = true; // perturbed lifts give the same class
    bool leibniz_ok = true;       // connection of (c x) vs x + c (connection x)
    std::string witness;
    bool ok() const { return lift_independent && leibniz_ok; }
};

// Connection axioms on every homology class of the given weight/degree
// slices (weight, degree pairs).
GmReport gm_flatness(const RelativeFamily& fam,
                     const std::vector<std::pair<int, int>>& slices, unsigned seed = 1);

} // namespace ncdr
