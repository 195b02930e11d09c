#pragma once

#include "ncdr/forms.hpp"
#include "ncdr/linalg.hpp"

#include <functional>
#include <map>

namespace ncdr {

// Concrete coordinatization of a form-degree component, optionally restricted
// to one total weight (graded algebras) and optionally reduced (degree 0
// drops the unit coordinate). Spaces are finite because the algebra is.
struct FormSpace {
    const FinDimAlgebra* A = nullptr;
    int degree = 0;
    int weight = -1; // -1: every weight
    bool reduced = false;
    std::vector<FormKey> keys;
    std::map<FormKey, int> index;

    int dim() const { return static_cast<int>(keys.size()); }
    RatVec vec(const Form& f) const; // throws InternalError on stray keys
    Form form(const RatVec& v) const;
};

FormSpace form_space(const FinDimAlgebra& A, int degree, int weight = -1,
                     bool reduced = false);

// Matrix of a linear operator between two coordinatized spaces.
Mat operator_matrix(const FormSpace& from, const FormSpace& to,
                    const std::function<Form(const Form&)>& op);

// Quotient of a form space with a canonical linear section.
struct QuotientSpace {
    FormSpace ambient;
    Mat projection; // dim() x ambient.dim()
    Mat section;    // ambient.dim() x dim(); projection * section = Id
    int dim() const { return projection.rows; }

    RatVec project(const Form& f) const { return projection.apply(ambient.vec(f)); }
    Form represent(const RatVec& q) const { return ambient.form(section.apply(q)); }
    // Matrix of an endomorphism of the ambient space on the quotient.
    Mat descend(const Mat& ambient_op) const { return projection * ambient_op * section; }
};

// Quotient of `space` by the span of the given relation vectors.
QuotientSpace quotient_by(const FormSpace& space, const std::vector<RatVec>& relations);

// Omega_nat^n = Omega^n / [A, Omega^n]. The commutator span is asserted equal
// to the image of b from degree n+1 (same weight slice when weight >= 0).
QuotientSpace natural_quotient(const FinDimAlgebra& A, int degree, int weight = -1);

// DR^n realized as the kappa-invariant part of Omega_nat^n via the averaging
// projector (1/n) sum kappa^i (degree 0: A/[A,A]). The section lands on
// kappa-invariant classes.
QuotientSpace dr_space(const FinDimAlgebra& A, int degree, int weight = -1);

// Harmonic decomposition of reduced forms: P projects onto Ker(Id-kappa)^2
// along Im(Id-kappa)^2.
struct HarmonicDecomposition {
    FormSpace space; // reduced
    Mat P;
    Mat Pperp; // Id - P
};

HarmonicDecomposition harmonic_projector(const FinDimAlgebra& A, int degree,
                                         int weight = -1);

// Exact membership of f in [Omega, Omega] = b(Omega) + (Id - kappa)(Omega) in
// its degree (per weight slice when the algebra is graded).
bool in_commutator_subspace(const FinDimAlgebra& A, const Form& f);

// Pivot basis of the degree-n part of the super-commutator space of the form
// algebra: span of u v - (-1)^{pq} v u over basis pairs with p + q = n.
// Optional weight restricts both factors to a total weight.
std::vector<Form> commutator_subspace(const FinDimAlgebra& A, int degree, int weight = -1);

} // namespace ncdr
