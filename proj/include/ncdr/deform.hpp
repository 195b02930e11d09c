#pragma once

#include "ncdr/algebra.hpp"
#include "ncdr/tword.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace ncdr {

// Multilinear map A^{ox p} -> A^{ox k}, stored densely: one column per input
// basis tuple (big-endian multi-index), rows over the target tensor basis.
// The target carries the outer bimodule structure (left action on the first
// factor, right action on the last).
struct Cochain {
    int p = 1, k = 1;
    Mat m;

    Cochain() : m(0, 0) {}
    Cochain(const FinDimAlgebra& A, int p_, int k_);
    std::pair<int, int> bidegree() const { return {p, 2 * k - 2}; }
    bool zero() const { return m.all_zero(); }
    bool operator==(const Cochain& o) const { return p == o.p && k == o.k && m == o.m; }
    Cochain operator+(const Cochain& o) const;
    Cochain operator-(const Cochain& o) const;
    Cochain scaled(const Rat& c) const;
};

int tensor_dim(const FinDimAlgebra& A, int n); // dim^n

// Concatenate arguments, multiply the adjacent target slots.
Cochain cup(const FinDimAlgebra& A, const Cochain& f, const Cochain& g);
// f applied to the first p components of (inputs, g-output spliced in).
Cochain vdash(const FinDimAlgebra& A, const Cochain& f, const Cochain& g);
// g applied starting at the last output factor of f.
Cochain dashv(const FinDimAlgebra& A, const Cochain& f, const Cochain& g);
Cochain vee(const FinDimAlgebra& A, const Cochain& f, const Cochain& g);
// Hochschild coboundary with the outer bimodule action on the target.
Cochain coboundary(const FinDimAlgebra& A, const Cochain& f);

Cochain multiplication_cochain(const FinDimAlgebra& A); // in C^2(A, A)
Cochain random_cochain(const FinDimAlgebra& A, int p, int k, std::mt19937& rng);

// Is f in the image of the coboundary from C^{p-1}(A, A^{ox k})?
bool is_coboundary(const FinDimAlgebra& A, const Cochain& f);

struct DgReport {
    unsigned seed = 0;
    int tuples = 0;                       // randomized tuples exercised
    std::map<std::string, int> checked;   // identity label -> count
    std::string witness;                  // first failing identity, if any
    bool ok() const { return witness.empty(); }
};

// Randomized sweep of the cochain-algebra identities: associativity of the
// difference product, the DG Leibniz rule, cup compatibilities, mutual
// associativity, the two Leibniz defects with the cup correction term, and
// cup-nullity on cohomology.
DgReport verify_dg_suite(const FinDimAlgebra& A, unsigned seed = 1, int tuples = 50);

struct FirstOrderReport {
    bool associative = false;  // brute-force on the extension A + (A ox A)
    bool cocycle = false;      // coboundary(beta) == 0
    std::vector<int> witness;  // first failing basis triple when not associative
    bool consistent() const { return associative == cocycle; }
};

// The square-zero extension product on A + (A ox A) twisted by beta.
FirstOrderReport first_order(const FinDimAlgebra& A, const Cochain& beta);
// First-order products are equivalent iff the difference is a coboundary.
bool first_order_equivalent(const FinDimAlgebra& A, const Cochain& beta, const Cochain& gamma);

struct McReport {
    int order = 0;                        // orders tested
    int first_fail = 0;                   // 0 when every order passes
    bool obstructions_are_cocycles = true;
    bool pass() const { return first_fail == 0; }
};

// betas[m-1] is the order-m structure map in C^2(A, A^{ox (m+1)}). The
// order-m condition matches the coboundary of betas[m-1] against the sum of
// difference products of complementary lower orders; each obstruction is
// verified to be a 3-cocycle while the lower orders hold.
McReport mc_check(const FinDimAlgebra& A, const std::vector<Cochain>& betas);

// phis[m-1] in C^1(A, A^{ox (m+1)}). Finite gauge transport: conjugate the
// truncated star product by Id + sum of slotwise extensions of the phis and
// re-extract the order components. Exact, so associativity is preserved.
std::vector<Cochain> gauge_transport(const FinDimAlgebra& A, const std::vector<Cochain>& betas,
                                     const std::vector<Cochain>& phis, int order);

// The infinitesimal gauge action: coboundary of phi plus the splice of the
// deformation terms through phi on either argument, minus phi extended over
// the deformation value. Linear part of the finite transport in phi.
std::vector<Cochain> gauge_linear(const FinDimAlgebra& A, const std::vector<Cochain>& betas,
                                  const std::vector<Cochain>& phis, int order);

// Presentation-level deformation: each relation r is replaced by r - phi(r)
// inside the free product with a central-free parameter letter t.
struct DeformationDatum {
    AlgebraPresentation base;    // relations over the base generators
    std::vector<NCPoly> phi;     // phi[i] over base generators + t (last index)
    int t_order = 3;
};

// Extended generator set of a datum: base generators plus the parameter.
GeneratorSet extended_gens(const DeformationDatum& d, int t_weight = 2);

// Quotient of the free product by { r - phi(r) }, materialized below the
// weight cap. The parameter letter is not central. Throws when a phi value
// has a parameter-free term (it must lie in the augmentation ideal) or when
// completion is not confluent below the cap.
FinDimAlgebra build_A_phi(const DeformationDatum& d, int cap, int t_weight = 2);

struct FlatnessReport {
    int orders = 0;
    int cap = 0;
    // dims[m][w]: parameter-order m, total weight w piece of the deformation
    // against the free product count; mismatches recorded as (m, w) pairs.
    std::vector<std::pair<int, int>> mismatches;
    bool flat() const { return mismatches.empty(); }
};

FlatnessReport flatness_check(const DeformationDatum& d, int cap, int t_weight = 2);

struct AnickReport {
    bool composition_zero = false;
    bool minimal = false;               // relations meet the square of the ideal in 0
    std::vector<int> exact_weights;     // weights where the resolution is exact
    std::vector<int> inexact_weights;
    // H^2(A, A ox A) dimensions per weight shift (value weight minus relation
    // weight); the three-term resolution gives H^3 = 0 identically.
    std::map<int, int> h2_by_shift;
    bool ok() const { return composition_zero && inexact_weights.empty(); }
};

// Three-term bimodule resolution of A = TV/(L) below the weight cap, with
// exactness and minimality checks and cohomology with A-ox-A coefficients.
AnickReport anick(const AlgebraPresentation& pres, int cap);

struct EquivalenceReport {
    bool solvable = false;
    // Solution f: V -> truncated augmentation ideal, one value per generator,
    // recorded as tensor words with coefficients.
    std::vector<TElem> f;
};

// Linear criterion for equivalence of two deformation data over the same
// presentation: solve pi(phi - psi) = Theta_f on the relations for f.
EquivalenceReport equivalence_linear(const DeformationDatum& phi, const DeformationDatum& psi,
                                     int cap);

} // namespace ncdr
