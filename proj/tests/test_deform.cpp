#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncdr/deform.hpp"
#include "ncdr/forms.hpp"
#include "ncdr/parse.hpp"

using namespace ncdr;

namespace {

AlgebraPresentation pres(const GeneratorSet& g, const std::vector<std::string>& rels, int cap) {
    AlgebraPresentation p;
    p.gens = g;
    for (const auto& r : rels) p.relations.push_back(parse_poly(r, g));
    p.degree_cap = cap;
    return p;
}

FinDimAlgebra dual_numbers() { return build_findim(pres({{"e"}, {1}}, {"e*e"}, 3), 3); }
FinDimAlgebra x_cubed() { return build_findim(pres({{"x"}, {1}}, {"x^3"}, 5), 5); }

AlgebraPresentation comm_xy(int cap) {
    return pres({{"x", "y"}, {1, 1}}, {"x*y - y*x"}, cap);
}

Cochain unitless_random(const FinDimAlgebra& A, int p, int k, std::mt19937& rng) {
    Cochain c = random_cochain(A, p, k, rng);
    for (int i = 0; i < c.m.rows; ++i) c.m.at(i, 0) = 0; // kill the unit column
    return c;
}

// Coefficient of the linear term of a matrix-valued polynomial from sampled
// values at 0..deg, via the inverse Vandermonde.
std::vector<Cochain> linear_coefficient(const std::vector<std::vector<Cochain>>& samples) {
    int n = static_cast<int>(samples.size());
    Mat V(n, n);
    for (int i = 0; i < n; ++i) {
        Rat p = 1;
        for (int j = 0; j < n; ++j) {
            V.at(i, j) = p;
            p *= i;
        }
    }
    Mat Vi = *inverse(V);
    std::vector<Cochain> out;
    for (std::size_t m = 0; m < samples[0].size(); ++m) {
        Cochain acc = samples[0][m].scaled(Vi.at(1, 0));
        for (int i = 1; i < n; ++i)
            acc = acc + samples[static_cast<std::size_t>(i)][m].scaled(Vi.at(1, i));
        out.push_back(acc);
    }
    return out;
}

} // namespace

TEST_CASE("cochain algebra identities hold on random data") {
    DgReport r = verify_dg_suite(dual_numbers(), 7, 25);
    CHECK(r.ok());
    CHECK(r.tuples == 25);
    CHECK(r.checked.at("vee associativity") == 25);
    CHECK(r.checked.at("cup nullity on cocycles") > 0);

    DgReport s = verify_dg_suite(x_cubed(), 11, 8);
    CHECK(s.ok());
    CHECK(s.checked.at("mutual associativity") == 8);
}

TEST_CASE("multiplication is a Hochschild cocycle") {
    FinDimAlgebra A = dual_numbers();
    CHECK(coboundary(A, multiplication_cochain(A)).zero());
    FinDimAlgebra B = x_cubed();
    CHECK(coboundary(B, multiplication_cochain(B)).zero());
}

TEST_CASE("first-order products are associative exactly for cocycles") {
    FinDimAlgebra A = dual_numbers();
    std::mt19937 rng(3);

    Cochain zero(A, 2, 2);
    FirstOrderReport r0 = first_order(A, zero);
    CHECK(r0.associative);
    CHECK(r0.cocycle);

    // Coboundaries define associative products equivalent to the trivial one.
    Cochain f = random_cochain(A, 1, 2, rng);
    Cochain beta = coboundary(A, f);
    FirstOrderReport rb = first_order(A, beta);
    CHECK(rb.associative);
    CHECK(rb.cocycle);
    CHECK(first_order_equivalent(A, beta, zero));

    // A non-cocycle must fail associativity with a witness triple.
    Cochain bad(A, 2, 2);
    bad.m.at(0, 3) = 1; // 1 ox 1 on (e, e)
    REQUIRE_FALSE(coboundary(A, bad).zero());
    FirstOrderReport rw = first_order(A, bad);
    CHECK(rw.consistent());
    CHECK_FALSE(rw.associative);
    CHECK(rw.witness.size() == 3);
}

TEST_CASE("higher-order structure maps and obstructions") {
    FinDimAlgebra A = dual_numbers();
    std::mt19937 rng(5);

    // All-zero maps satisfy every order.
    std::vector<Cochain> zeros = {Cochain(A, 2, 2), Cochain(A, 2, 3), Cochain(A, 2, 4)};
    McReport rz = mc_check(A, zeros);
    CHECK(rz.pass());
    CHECK(rz.obstructions_are_cocycles);

    // Transporting the trivial product along a gauge produces a solution to
    // every order by construction.
    std::vector<Cochain> phis = {unitless_random(A, 1, 2, rng)};
    std::vector<Cochain> gammas = gauge_transport(A, {}, phis, 3);
    McReport rg = mc_check(A, gammas);
    CHECK(rg.pass());
    CHECK(rg.obstructions_are_cocycles);

    // A non-cocycle leading term fails at order one.
    Cochain bad(A, 2, 2);
    bad.m.at(0, 3) = 1;
    REQUIRE_FALSE(coboundary(A, bad).zero());
    McReport rbad = mc_check(A, {bad});
    CHECK(rbad.first_fail == 1);
}

TEST_CASE("gauge transport and its linearization") {
    FinDimAlgebra A = dual_numbers();
    std::mt19937 rng(9);
    int order = 2;

    // A base solution obtained by transporting the trivial product.
    std::vector<Cochain> psis = {unitless_random(A, 1, 2, rng)};
    std::vector<Cochain> betas = gauge_transport(A, {}, psis, order);
    REQUIRE(mc_check(A, betas).pass());

    // The trivial gauge leaves the structure maps alone.
    std::vector<Cochain> idgauge = {Cochain(A, 1, 2)};
    std::vector<Cochain> same = gauge_transport(A, betas, idgauge, order);
    REQUIRE(same.size() == betas.size());
    for (std::size_t i = 0; i < same.size(); ++i) CHECK(same[i] == betas[i]);

    // Transport by a genuine gauge preserves the solution property.
    std::vector<Cochain> phis = {unitless_random(A, 1, 2, rng)};
    std::vector<Cochain> gammas = gauge_transport(A, betas, phis, order);
    CHECK(mc_check(A, gammas).pass());

    // With no deformation the infinitesimal action is the plain coboundary.
    std::vector<Cochain> lin0 = gauge_linear(A, {}, phis, 1);
    CHECK(lin0[0] == coboundary(A, phis[0]));

    // The infinitesimal action matches the linear-in-phi part of the finite
    // transport: interpolate the transport at scaled gauges and extract the
    // first coefficient.
    std::vector<std::vector<Cochain>> samples;
    for (int eps = 0; eps <= order + 2; ++eps) {
        std::vector<Cochain> scaled = {phis[0].scaled(eps)};
        std::vector<Cochain> t = gauge_transport(A, betas, scaled, order);
        std::vector<Cochain> diff;
        for (std::size_t i = 0; i < t.size(); ++i) diff.push_back(t[i] - betas[i]);
        samples.push_back(std::move(diff));
    }
    std::vector<Cochain> lin = linear_coefficient(samples);
    std::vector<Cochain> expected = gauge_linear(A, betas, phis, order);
    REQUIRE(lin.size() == expected.size());
    for (std::size_t i = 0; i < lin.size(); ++i) CHECK(lin[i] == expected[i]);
}

TEST_CASE("presentation-level deformations and flatness") {
    // phi = 0 adjoins the parameter freely; the count is the free product.
    DeformationDatum trivial{comm_xy(6), {NCPoly{}}, 2};
    CHECK(flatness_check(trivial, 6).flat());

    // The Weyl deformation x*y - y*x = t.
    DeformationDatum weyl{comm_xy(6), {}, 2};
    GeneratorSet ext = extended_gens(weyl);
    weyl.phi = {parse_poly("t", ext)};
    FinDimAlgebra W = build_A_phi(weyl, 6);
    CHECK(W.coords(parse_poly("y*x", ext)) ==
          W.coords(parse_poly("x*y - t", ext)));
    // The parameter is not central.
    CHECK_FALSE(W.coords(parse_poly("x*t", ext)) == W.coords(parse_poly("t*x", ext)));
    CHECK(flatness_check(weyl, 6).flat());

    // Dual numbers with e^2 = t are not flat: completion forces t past e
    // (t and e^2 agree, so "te" and "et" collapse), and the basis e^a t^b is
    // strictly smaller than the free product count.
    DeformationDatum dual{pres({{"e"}, {1}}, {"e*e"}, 6), {}, 2};
    GeneratorSet dext = extended_gens(dual);
    dual.phi = {parse_poly("t", dext)};
    FinDimAlgebra D = build_A_phi(dual, 6);
    CHECK(D.coords(parse_poly("e*e", dext)) == D.coords(parse_poly("t", dext)));
    CHECK(D.coords(parse_poly("t*e", dext)) == D.coords(parse_poly("e*t", dext)));
    FlatnessReport fr = flatness_check(dual, 6);
    CHECK_FALSE(fr.flat());
    // one t and one e: "et" survives but "te" folds into it
    bool found = false;
    for (auto [m, w] : fr.mismatches)
        if (m == 1 && w == 3) found = true;
    CHECK(found);

    // Values outside the augmentation ideal are rejected.
    DeformationDatum badphi{comm_xy(4), {}, 2};
    badphi.phi = {parse_poly("x*y", extended_gens(badphi))};
    CHECK_THROWS_AS(build_A_phi(badphi, 4), InternalError);
}

TEST_CASE("three-term resolution of a commutative polynomial ring") {
    AnickReport r = anick(comm_xy(4), 4);
    CHECK(r.ok());
    CHECK(r.minimal);
    CHECK(r.composition_zero);
    // Bimodule self-duality: the second cohomology is a shifted copy of the
    // algebra itself, one dimension per weight.
    for (const auto& [s, h] : r.h2_by_shift) CHECK(h == s + 3);
    CHECK(r.h2_by_shift.count(-2) == 1);

    // Free algebras have no relations and the complex degenerates.
    AnickReport f = anick(pres({{"x", "y"}, {1, 1}}, {}, 3), 3);
    CHECK(f.ok());
    CHECK(f.h2_by_shift.empty());
}

TEST_CASE("linear equivalence criterion for deformation data") {
    // Identical data are equivalent via f = 0.
    DeformationDatum weyl{comm_xy(4), {}, 1};
    GeneratorSet ext = extended_gens(weyl);
    weyl.phi = {parse_poly("t", ext)};
    EquivalenceReport same = equivalence_linear(weyl, weyl, 4);
    CHECK(same.solvable);
    for (const TElem& v : same.f) CHECK(v.zero());

    // A hand-built gauge image: perturbing phi by the relation-derivative of
    // f(x) = t stays solvable.
    DeformationDatum shifted = weyl;
    shifted.phi = {parse_poly("t + t*y - y*t", ext)};
    CHECK(equivalence_linear(weyl, shifted, 4).solvable);

    // Rescaling the parameter is not an equivalence over the parameter ring.
    DeformationDatum doubled = weyl;
    doubled.phi = {parse_poly("2*t", ext)};
    CHECK_FALSE(equivalence_linear(weyl, doubled, 4).solvable);
}
