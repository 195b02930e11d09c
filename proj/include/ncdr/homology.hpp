#pragma once

#include "ncdr/spaces.hpp"

#include <vector>

namespace ncdr {

// Complex with degrees lo .. lo + dims.size() - 1 and differentials lowering
// the degree: diff[j] maps degree lo+j to degree lo+j-1 (diff[0] has zero
// rows). validate() checks shapes and that consecutive maps compose to zero.
struct ChainComplex {
    int lo = 0;
    std::vector<int> dims;
    std::vector<Mat> diff;
    int top() const { return lo + static_cast<int>(dims.size()) - 1; }
    void validate() const;
};

struct DegreeHomology {
    int degree = 0;
    int dim = 0;
    std::vector<RatVec> reps; // kernel vectors independent modulo the image
};

// Exact homology in every degree. The extreme degrees are computed against
// zero spaces outside the range; callers decide whether that is honest.
std::vector<DegreeHomology> homology(const ChainComplex& C);

// Restriction of a complex to compatible subspaces given by projectors
// (one square matrix per degree, commuting with the differential).
ChainComplex restrict_complex(const ChainComplex& C, const std::vector<Mat>& projectors,
                              std::vector<Mat>* sections_out = nullptr);

// Hochschild boundary on degree-n bar words, built directly from the
// structure constants (independent oracle for the form-calculus boundary).
Mat bar_boundary(const FinDimAlgebra& A, int n, int weight = -1);

struct HochschildReport {
    std::vector<DegreeHomology> degrees; // 0 .. n_max
    bool oracle_agrees = false;          // bar oracle gives the same dimensions
    bool truncation_risk = false;        // truncated algebra without an exact weight slice
    bool ok() const { return oracle_agrees; }
};

HochschildReport hochschild(const FinDimAlgebra& A, int n_max, int weight = -1);

struct KernelIotaReport {
    int degree = 0;
    int dim = 0;                 // dim Ker(contraction on the trace quotient)
    std::vector<RatVec> reps;    // in trace-quotient coordinates
    int hochschild_dim = 0;
    bool descends = false;       // the contraction factors through the quotient
    bool matches = false;        // dim equals the Hochschild dimension
    bool ok() const { return descends && matches; }
};

KernelIotaReport hh_kernel_iota(const FinDimAlgebra& A, int n, int weight = -1);

struct SesReport {
    int degree = 0;
    int h_dim = 0;        // Hochschild dimension (kernel term)
    int dr_dim = 0;       // middle term
    int target_dim = 0;   // kappa-invariant commutators [A, forms] one degree down
    bool kernel_matches = false;
    bool image_matches = false; // image of the contraction = the target space
    bool dims_balance = false;
    bool ok() const { return kernel_matches && image_matches && dims_balance; }
};

SesReport verify_ses(const FinDimAlgebra& A, int n, int weight = -1);

enum class WindowVariant { b_conn, contraction }; // B + t b  vs  d + t iota
enum class WindowMode { periodic, cyclic, negative };

// One degree of the t-window: the direct sum over form degrees k (same
// parity as n) admitted by the mode and the truncation level. The cutoff
// fixes a minimal t-power, chosen so the lowest window degree reaches form
// degree D; this cuts a genuine quotient complex (square-zero everywhere).
struct WindowComplex {
    const FinDimAlgebra* A = nullptr;
    WindowVariant variant = WindowVariant::b_conn;
    WindowMode mode = WindowMode::periodic;
    int n_lo = 0, n_hi = 0, D = 0, weight = -1;
    std::vector<std::vector<int>> ks;        // form degrees per window degree
    std::vector<std::vector<FormSpace>> comps;
    ChainComplex C;                          // C.lo = n_lo
    // Degrees whose incoming and outgoing differentials both live inside
    // the window range.
    bool boundary_valid(int n) const { return n > n_lo && n < n_hi; }
};

WindowComplex build_window(const FinDimAlgebra& A, WindowVariant variant, WindowMode mode,
                           int n_lo, int n_hi, int D, int weight = -1);

struct PeriodicReport {
    int n_lo = 0, n_hi = 0, D = 0, weight = -1;
    std::vector<int> degrees;                 // boundary-valid degrees
    // Rank of the map induced on homology by the truncation-tower transition
    // (cutoff D+2 onto cutoff D), for each variant.
    std::vector<int> dims_contraction;
    std::vector<int> dims_b_conn;
    bool variants_agree = false;
    bool stable = false;                      // same ranks one level shallower
    bool intertwiner_ok = false;              // factorial rescaling intertwines
    bool ok() const { return variants_agree && stable && intertwiner_ok; }
};

PeriodicReport periodic_homology(const FinDimAlgebra& A, int n_lo, int n_hi, int D,
                                 int weight = -1);

struct CyclicReport {
    int n_lo = 0, n_hi = 0, D = 0, weight = -1;
    std::vector<int> degrees;
    std::vector<int> hc, hc_minus;            // B + t b theories
    std::vector<int> heart_hc, heart_hc_minus;
    std::vector<int> p_heart_hc, p_heart_hc_minus;
    bool p_comparison = false;                // P(heart) dims = plain dims
    bool p_perp_hc_vanishes = false;
    // Cyclic windows are exact by construction; the negative theory is a
    // tower transition rank and carries its own stability verdict.
    bool hc_minus_stable = false;
    bool ok() const { return p_comparison && p_perp_hc_vanishes && hc_minus_stable; }
};

CyclicReport cyclic_and_negative(const FinDimAlgebra& A, int n_lo, int n_hi, int D,
                                 int weight = -1);

struct HodgeClass {
    int degree = 0;
    int level = 0;      // maximal filtration step found by the search
    bool is_zero = false;
    bool certified = false; // false when the window is too small to be sure
    RatVec rep;
};

// Maximal n such that the cycle is homologous, inside the window, to a
// representative supported in form degrees >= 2n (resp. 2n + 1).
HodgeClass hodge_degree(const WindowComplex& W, int n, const RatVec& cycle);

struct ConnectedHamReport {
    bool applicable = false;    // connected and vanishing second Hochschild group
    bool connected = false;
    bool h2_vanishes = false;
    int weight = -1;
    int closed_dr2 = 0;
    int commutator_dim = 0;
    int closed_dr1 = 0;
    int exact_dr1 = 0;
    int h1_dim = 0;
    bool dims_match = false;
    bool d_surjective = false;  // d maps the trace 1-forms onto the closed 2-classes
    bool ok() const { return !applicable || (dims_match && d_surjective); }
};

// Checks, per weight slice when given, that closed trace 2-classes match the
// commutator space and closed = exact trace 1-classes match the first
// Hochschild group, for connected algebras with vanishing second one.
ConnectedHamReport verify_connected_ham(const FinDimAlgebra& A, int weight = -1);

// Cyclic-word quotient complex over full tensor powers (independent oracle
// for the cyclic theory over the rationals; unreduced).
std::vector<int> cyclic_oracle_dims(const FinDimAlgebra& A, int n_max);

struct HarmonicSuiteReport {
    int n_max = 0;
    int weight = -1;
    std::map<std::string, int> checked; // identity label -> count
    std::string witness;
    bool ok() const { return witness.empty(); }
};

// Harmonic-decomposition suite on reduced forms of degree <= n_max: the
// projector is idempotent, both pieces are stable under d, b, B and the
// contraction, B is (n+1) d and the contraction is n b on the harmonic
// piece and both vanish on the other, and the d-complex and the
// perpendicular b-complex are acyclic inside the window.
HarmonicSuiteReport verify_harmonic_suite(const FinDimAlgebra& A, int n_max, int weight = -1);

} // namespace ncdr
