#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncdr/parse.hpp"
#include "ncdr/identity_suite.hpp"
#include "ncdr/spaces.hpp"

using namespace ncdr;

namespace {

AlgebraPresentation pres(const GeneratorSet& g, const std::vector<std::string>& rels, int cap) {
    AlgebraPresentation p;
    p.gens = g;
    for (const auto& r : rels) p.relations.push_back(parse_poly(r, g));
    p.degree_cap = cap;
    return p;
}

FinDimAlgebra free_xy(int cap) { return build_findim(pres({{"x", "y"}, {1, 1}}, {}, cap), cap); }
FinDimAlgebra dual_numbers() { return build_findim(pres({{"e"}, {1}}, {"e*e"}, 3), 3); }
FinDimAlgebra x_cubed() { return build_findim(pres({{"x"}, {1}}, {"x^3"}, 5), 5); }

} // namespace

TEST_CASE("form space enumeration and coordinates") {
    FinDimAlgebra A = dual_numbers();
    FormSpace s0 = form_space(A, 0);
    CHECK(s0.dim() == 2);
    FormSpace s0r = form_space(A, 0, -1, true);
    CHECK(s0r.dim() == 1);
    FormSpace s2 = form_space(A, 2);
    CHECK(s2.dim() == 2); // a0 in {1, e}, both tail slots forced to e
    FinDimAlgebra F = free_xy(2);
    // weight-2 1-forms: a0 weight 1 with weight-1 tail, or unit with weight-2 tail.
    FormSpace w2 = form_space(F, 1, 2);
    CHECK(w2.dim() == 2 * 2 + 4);
    for (const auto& k : w2.keys) {
        RatVec v = w2.vec(Form::basis(k));
        CHECK(w2.form(v) == Form::basis(k));
    }
}

TEST_CASE("natural quotient") {
    FinDimAlgebra E = dual_numbers();
    // Commutative algebra: degree-0 commutators vanish.
    QuotientSpace q0 = natural_quotient(E, 0);
    CHECK(q0.dim() == 2);
    // Omega^1 has basis {de, e de}; [e, de] = 2 e de spans the relations
    // (d(e^2) = 0 makes (de)e = -e de), so the quotient is one-dimensional.
    QuotientSpace q1 = natural_quotient(E, 1);
    CHECK(q1.dim() == 1);
    CHECK((q1.projection * q1.section) == Mat::identity(q1.dim()));

    FormOps ops(E);
    for (int n = 1; n <= 4; ++n) {
        QuotientSpace q = natural_quotient(E, n);
        CHECK((q.projection * q.section) == Mat::identity(q.dim()));
        // kappa descends with kappa^n = Id.
        Mat K = q.descend(
            operator_matrix(q.ambient, q.ambient, [&](const Form& w) { return ops.kappa(w); }));
        Mat pw = Mat::identity(q.dim());
        for (int i = 0; i < n; ++i) pw = K * pw;
        CHECK(pw == Mat::identity(q.dim()));
        // b vanishes on the quotient's relation subspace by construction:
        // projection kills b-images from one degree up.
        FormSpace up = form_space(E, n + 1);
        for (const auto& k : up.keys) {
            Form img = ops.b(Form::basis(k));
            if (!img.zero()) {
                RatVec cls = q.project(img);
                for (const auto& c : cls) CHECK(c == 0);
            }
        }
    }
}

TEST_CASE("natural quotient on weight slices") {
    FinDimAlgebra F = free_xy(3);
    for (int n = 1; n <= 3; ++n)
        for (int w = n; w <= 4; ++w) {
            QuotientSpace q = natural_quotient(F, n, w);
            CHECK((q.projection * q.section) == Mat::identity(q.dim()));
        }
}

TEST_CASE("de Rham space") {
    // Cyclic words of the free algebra at cap 2: 1, x, y, xx, xy ~ yx, yy.
    FinDimAlgebra F = free_xy(2);
    QuotientSpace dr0 = dr_space(F, 0);
    CHECK(dr0.dim() == 6);

    FinDimAlgebra E = dual_numbers();
    FormOps ops(E);
    for (int n = 1; n <= 4; ++n) {
        QuotientSpace dr = dr_space(E, n);
        CHECK((dr.projection * dr.section) == Mat::identity(dr.dim()));
        // Section images are kappa-invariant classes of the natural quotient.
        QuotientSpace nat = natural_quotient(E, n);
        Mat K = nat.descend(
            operator_matrix(nat.ambient, nat.ambient, [&](const Form& w) { return ops.kappa(w); }));
        for (int j = 0; j < dr.dim(); ++j) {
            RatVec col(dr.section.rows);
            for (int i = 0; i < dr.section.rows; ++i) col[i] = dr.section.at(i, j);
            // dr.section = nat.section * sec2; recover the class in the
            // natural quotient and test invariance there.
            RatVec cls = nat.projection.apply(col);
            RatVec kcls = K.apply(cls);
            CHECK(kcls == cls);
        }
    }
}

TEST_CASE("harmonic decomposition basics") {
    for (FinDimAlgebra A : {dual_numbers(), x_cubed()}) {
        FormOps ops(A);
        for (int n = 0; n <= 4; ++n) {
            HarmonicDecomposition h = harmonic_projector(A, n);
            int dim = h.space.dim();
            CHECK((h.P * h.P) == h.P);
            CHECK((h.P + h.Pperp) == Mat::identity(dim));
            Mat K = operator_matrix(h.space, h.space, [&](const Form& w) {
                Form img = ops.kappa(w);
                if (n == 0) img.terms.erase(FormKey(1, '\0'));
                return img;
            });
            Mat M = Mat::identity(dim) - K;
            M = M * M;
            CHECK((h.P * M).all_zero());
            // kappa stability of both pieces.
            CHECK((h.Pperp * K * h.P).all_zero());
            CHECK((h.P * K * h.Pperp).all_zero());
            if (n == 0) CHECK(h.P == Mat::identity(dim));
        }
    }
}

TEST_CASE("harmonic pieces are stable under the operator zoo") {
    for (FinDimAlgebra A : {dual_numbers(), x_cubed()}) {
        FormOps ops(A);
        std::vector<HarmonicDecomposition> h;
        for (int n = 0; n <= 5; ++n) h.push_back(harmonic_projector(A, n));
        auto reduced0 = [&](Form f, int target) {
            if (target == 0) f.terms.erase(FormKey(1, '\0'));
            return f;
        };
        for (int n = 0; n <= 4; ++n) {
            Mat d = operator_matrix(h[n].space, h[n + 1].space,
                                    [&](const Form& w) { return ops.d(w); });
            Mat B = operator_matrix(h[n].space, h[n + 1].space,
                                    [&](const Form& w) { return ops.connes_B(w); });
            CHECK((h[n + 1].Pperp * d * h[n].P).all_zero());
            CHECK((h[n + 1].P * d * h[n].Pperp).all_zero());
            CHECK((h[n + 1].Pperp * B * h[n].P).all_zero());
            CHECK((h[n + 1].P * B * h[n].Pperp).all_zero());
            if (n >= 1) {
                Mat b = operator_matrix(h[n].space, h[n - 1].space, [&](const Form& w) {
                    return reduced0(ops.b(w), n - 1);
                });
                Mat io = operator_matrix(h[n].space, h[n - 1].space, [&](const Form& w) {
                    return reduced0(ops.iota_delta(w), n - 1);
                });
                CHECK((h[n - 1].Pperp * b * h[n].P).all_zero());
                CHECK((h[n - 1].P * b * h[n].Pperp).all_zero());
                // Contraction kills the perpendicular piece outright and is
                // degree-times-b on the harmonic piece.
                CHECK((io * h[n].Pperp).all_zero());
                Mat nb = b;
                for (auto& row : nb.a)
                    for (auto& v : row) v *= n;
                CHECK((io * h[n].P) == (nb * h[n].P));
                // B is (n+1) d on the harmonic piece and 0 on the other.
                CHECK((B * h[n].Pperp).all_zero());
                Mat nd = d;
                for (auto& row : nd.a)
                    for (auto& v : row) v *= n + 1;
                CHECK((B * h[n].P) == (nd * h[n].P));
            }
        }
    }
}

TEST_CASE("harmonic decomposition on weight slices of the free algebra") {
    FinDimAlgebra F = free_xy(3);
    for (int n = 1; n <= 4; ++n)
        for (int w = n; w <= 4; ++w) {
            HarmonicDecomposition h = harmonic_projector(F, n, w);
            CHECK((h.P * h.P) == h.P);
            FormOps ops(F);
            Mat K = operator_matrix(h.space, h.space,
                                    [&](const Form& fm) { return ops.kappa(fm); });
            Mat M = Mat::identity(h.space.dim()) - K;
            CHECK((h.P * M * M).all_zero());
        }
}

namespace {

int idx(const FinDimAlgebra& A, const std::string& letters) {
    Word w;
    if (letters != "1")
        for (char ch : letters) w += static_cast<char>(A.gens.index_of(std::string(1, ch)));
    int i = A.index_of_word(*A.rs.reduce(NCPoly::word(w)).leading_word(A.gens));
    REQUIRE(i >= 0);
    return i;
}

FormKey key(const FinDimAlgebra& A, const std::string& a0, const std::vector<std::string>& tail) {
    FormKey k(1, static_cast<char>(idx(A, a0)));
    for (const auto& t : tail) k += static_cast<char>(idx(A, t));
    return k;
}

// Rank of a list of forms, viewed as vectors over their joint key set.
int span_rank(const std::vector<Form>& fs) {
    std::map<FormKey, int> rows;
    for (const auto& f : fs)
        for (const auto& [k, c] : f.terms) rows.emplace(k, static_cast<int>(rows.size()));
    Mat m(static_cast<int>(rows.size()), static_cast<int>(fs.size()));
    for (std::size_t j = 0; j < fs.size(); ++j)
        for (const auto& [k, c] : fs[j].terms) m.at(rows.at(k), static_cast<int>(j)) = c;
    return rank(m);
}

} // namespace

TEST_CASE("super-commutator subspaces of the form algebra") {
    FinDimAlgebra D = dual_numbers();
    // A commutative algebra has no commutators in degree zero.
    CHECK(commutator_subspace(D, 0).empty());
    // Weight-2 commutators of the truncated free algebra: just xy - yx.
    FinDimAlgebra F = free_xy(2);
    std::vector<Form> c2 = commutator_subspace(F, 0, 2);
    REQUIRE(c2.size() == 1);
    Form want = Form::basis(key(F, "xy", {})) - Form::basis(key(F, "yx", {}));
    CHECK(c2[0] == want);
    // Degree one over the dual numbers: [e, de] = 2 e de spans everything.
    std::vector<Form> c1 = commutator_subspace(D, 1);
    REQUIRE(c1.size() == 1);
    CHECK(c1[0] == Form::basis(key(D, "e", {"e"})) * Rat(2));
}

TEST_CASE("commutators are boundaries plus cyclic defects") {
    for (FinDimAlgebra A : {dual_numbers(), x_cubed()}) {
        FormOps ops(A);
        for (int n = 1; n <= 3; ++n) {
            std::vector<Form> comm = commutator_subspace(A, n);
            std::vector<Form> bk;
            for_each_form_key(A, n + 1, [&](const FormKey& k) {
                Form g = ops.b(Form::basis(k));
                if (!g.zero()) bk.push_back(g);
                return true;
            });
            for_each_form_key(A, n, [&](const FormKey& k) {
                Form w = Form::basis(k);
                Form g = w - ops.kappa(w);
                if (!g.zero()) bk.push_back(g);
                return true;
            });
            int rc = span_rank(comm);
            int rb = span_rank(bk);
            std::vector<Form> both = comm;
            both.insert(both.end(), bk.begin(), bk.end());
            CHECK(rc == rb);
            CHECK(span_rank(both) == rc);
        }
    }
}
