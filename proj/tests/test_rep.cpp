#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncdr/parse.hpp"
#include "ncdr/rep.hpp"

using namespace ncdr;

namespace {

FinDimAlgebra free_xy(int cap) {
    AlgebraPresentation p;
    p.gens = {{"x", "y"}, {1, 1}};
    p.degree_cap = cap;
    return build_findim(p, cap);
}

} // namespace

TEST_CASE("evaluation into generic matrices") {
    FinDimAlgebra A = free_xy(4);
    RepEval E(A, 2);
    const RepCtx& c = E.ctx();

    CHECK(E.ev(Word{}) == mat_identity(c));
    // Multiplicative by construction, exact on concatenations.
    Word x(1, 0), y(1, 1);
    CHECK(E.ev(Word{0, 1}) == mat_mul(c, E.ev(x), E.ev(y)));
    // Trace of a commutator vanishes.
    CHECK(E.trace_ev(Form::basis(FormKey(1, A.coords(parse_poly("x*y", A.gens))[0].first))) ==
          E.trace_ev(Form::basis(FormKey(1, A.coords(parse_poly("y*x", A.gens))[0].first))));

    // The evaluation intertwines the two de Rham differentials.
    FormOps ops(A);
    for (const FormKey& k : {FormKey("\1", 1), FormKey("\1\2", 2), FormKey("\3\1", 2)}) {
        Form f = Form::basis(k);
        CHECK(E.ev_omega(ops.d(f)) == mat_d(c, E.ev_omega(f)));
    }
}

TEST_CASE("basic forms under the conjugation action") {
    FinDimAlgebra A = free_xy(3);
    RepEval E2(A, 2);
    const RepCtx& c2 = E2.ctx();

    // Trace of a generic matrix is conjugation invariant with no contraction.
    CommForm trx = E2.trace_ev(Form::basis(FormKey(1, 1)));
    CHECK(c2.is_basic(trx));
    // A single coordinate differential is not basic.
    CommForm dx11;
    dx11.add({{}, {c2.xvar(0, 0, 0)}}, 1);
    CHECK_FALSE(c2.is_basic(dx11));
    CHECK_FALSE(c2.contract(0, 1, dx11).zero());

    // One-dimensional V: the conjugation fields vanish and everything is basic.
    RepEval E1(A, 1);
    const RepCtx& c1 = E1.ctx();
    CommForm dx;
    dx.add({{}, {c1.xvar(0, 0, 0)}}, 1);
    CHECK(c1.is_basic(dx));
}

TEST_CASE("equivariant differential bookkeeping") {
    FinDimAlgebra A = free_xy(3);
    RepEval E(A, 2);
    const RepCtx& c = E.ctx();

    // Contraction kills 0-forms, so d_g does too.
    CommForm poly;
    poly.add({{c.xvar(0, 0, 1), c.gvar(1, 1)}, {}}, 3);
    CHECK(c.d_g(poly).zero());

    // The total differential squares to zero on invariant images.
    ExtendedOps ext(A);
    for (const ExtWord& w :
         {ExtWord{FormKey("\0\1", 2)}, ExtWord{FormKey(1, 2), FormKey("\0\1", 2)}}) {
        CommForm tr = E.trace_ev(ext.piece(w));
        auto total = [&](const CommForm& f) { return c.d(f) + c.d_g(f); };
        CHECK(total(total(tr)).zero());
    }
}

TEST_CASE("representation theorem sample grid") {
    RepThmReport r1 = verify_rep_thm(1, 3);
    CHECK(r1.ok());
    CHECK(r1.equivariant_samples > 0);
    CHECK(r1.homology_samples > 0);

    RepThmReport r2 = verify_rep_thm(2, 3);
    INFO(r2.witness);
    CHECK(r2.ok());
    CHECK(r2.morphism_pairs > 0);
    CHECK(r2.commutator_samples > 0);
    CHECK(r2.equivariant_samples > 0);
    CHECK(r2.homology_samples > 0);
}
