#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncdr/forms.hpp"
#include "ncdr/identity_suite.hpp"
#include "ncdr/linalg.hpp"
#include "ncdr/parse.hpp"

#include <map>
#include <set>
#include <random>

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
FinDimAlgebra free_x(int cap) { return build_findim(pres({{"x"}, {1}}, {}, cap), cap); }
FinDimAlgebra dual_numbers() { return build_findim(pres({{"e"}, {1}}, {"e*e"}, 3), 3); }
FinDimAlgebra x_cubed() { return build_findim(pres({{"x"}, {1}}, {"x^3"}, 5), 5); }
FinDimAlgebra ground_field() { return build_findim(pres({{}, {}}, {}, 1), 1); }

// Basis index of the normal word spelled with one generator name per letter;
// "1" is the unit.
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

int form_weight(const FinDimAlgebra& A, const FormKey& k) {
    int w = 0;
    for (unsigned char c : k) w += A.weight(c);
    return w;
}

// Membership of v in b(deg n+1 keys) + (Id - kappa)(deg n keys), the
// commutator subspace of the degree-n form space, restricted to the weights
// occurring in v (both generators preserve total weight).
bool in_commutator_span(const FinDimAlgebra& A, const FormOps& ops, const Form& v) {
    if (v.zero()) return true;
    int n = v.degree;
    std::set<int> weights;
    for (const auto& [k, c] : v.terms) weights.insert(form_weight(A, k));
    std::vector<Form> gens;
    for_each_form_key(A, n, [&](const FormKey& k) {
        if (!weights.count(form_weight(A, k))) return true;
        Form w = Form::basis(k);
        Form g = w - ops.kappa(w);
        if (!g.zero()) gens.push_back(g);
        return true;
    });
    for_each_form_key(A, n + 1, [&](const FormKey& k) {
        if (!weights.count(form_weight(A, k))) return true;
        Form g = ops.b(Form::basis(k));
        if (!g.zero()) gens.push_back(g);
        return true;
    });
    // Index every key seen, then solve.
    std::map<FormKey, int> rows;
    auto row = [&](const FormKey& k) {
        return rows.emplace(k, static_cast<int>(rows.size())).first->second;
    };
    for (const auto& g : gens)
        for (const auto& [k, c] : g.terms) row(k);
    for (const auto& [k, c] : v.terms) row(k);
    Mat m(static_cast<int>(rows.size()), static_cast<int>(gens.size()) + 1);
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (const auto& [k, c] : gens[j].terms) m.at(row(k), static_cast<int>(j)) = c;
    for (const auto& [k, c] : v.terms) m.at(row(k), static_cast<int>(gens.size())) = c;
    // v in span iff appending it does not raise the rank.
    Mat without(static_cast<int>(rows.size()), static_cast<int>(gens.size()));
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (const auto& [k, c] : gens[j].terms) without.at(row(k), static_cast<int>(j)) = c;
    return rank(m) == rank(without);
}

// Random form with total weight <= max_weight, so that no operator ever
// meets the degree cap and the truncated algebra computes exact answers.
Form random_form(const FinDimAlgebra& A, int degree, int max_weight, std::mt19937& rng,
                 int terms = 4) {
    std::uniform_int_distribution<int> a0(0, A.dim() - 1), t(1, A.dim() - 1), c(-3, 3);
    Form f(degree);
    for (int i = 0; i < terms;) {
        FormKey k(1, static_cast<char>(a0(rng)));
        for (int j = 0; j < degree; ++j) k += static_cast<char>(t(rng));
        if (form_weight(A, k) > max_weight) continue;
        f.add(k, c(rng));
        ++i;
    }
    return f;
}

// Weight-homogeneous derivation: each generator value splits the generator's
// weight between the two tensor slots. Such a derivation is honest on the
// truncated algebra as long as inputs stay below the cap.
DoubleDerivation random_theta(const FinDimAlgebra& A, std::mt19937& rng) {
    std::uniform_int_distribution<int> c(-2, 2);
    std::vector<int> wt1;
    for (int i = 1; i < A.dim(); ++i)
        if (A.weight(i) == 1) wt1.push_back(i);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(wt1.size()) - 1);
    std::vector<std::vector<std::tuple<int, int, Rat>>> gv(A.gens.names.size());
    for (auto& v : gv)
        for (int i = 0; i < 2; ++i) {
            int g = wt1[pick(rng)];
            if (i % 2 == 0) v.emplace_back(0, g, c(rng));
            else v.emplace_back(g, 0, c(rng));
        }
    DoubleDerivation th = DoubleDerivation::from_generators(A, gv);
    th.verified = check_double_derivation(A, th).pass();
    return th;
}

} // namespace

TEST_CASE("differential examples") {
    FinDimAlgebra A = free_xy(3);
    FormOps ops(A);
    Form x = Form::basis(key(A, "x", {}));
    CHECK(ops.d(x) == Form::basis(key(A, "1", {"x"})));
    CHECK(ops.d(ops.d(x)).zero());
    CHECK(ops.d(Form::basis(key(A, "x", {"y"}))) == Form::basis(key(A, "1", {"x", "y"})));
    CHECK(ops.d(Form::basis(key(A, "1", {}))).zero());
}

TEST_CASE("boundary examples") {
    FinDimAlgebra A = free_xy(3);
    FormOps ops(A);
    // x dy -> xy - yx
    Form bxy = ops.b(Form::basis(key(A, "x", {"y"})));
    Form expect = Form::basis(key(A, "xy", {})) - Form::basis(key(A, "yx", {}));
    CHECK(bxy == expect);
    CHECK(ops.b(Form::basis(key(A, "x", {}))).zero());
    // dx dy -> y dx + x dy - d(xy)
    Form b2 = ops.b(Form::basis(key(A, "1", {"x", "y"})));
    Form expect2 = Form::basis(key(A, "y", {"x"})) + Form::basis(key(A, "x", {"y"})) -
                   Form::basis(key(A, "1", {"xy"}));
    CHECK(b2 == expect2);
}

TEST_CASE("Karoubi operator examples") {
    FinDimAlgebra A = free_xy(3);
    FormOps ops(A);
    Form a = Form::basis(key(A, "xy", {}));
    CHECK(ops.kappa(a) == a);
    CHECK(ops.kappa(Form::basis(key(A, "1", {"x", "y"}))) ==
          Form::basis(key(A, "1", {"y", "x"})) * Rat(-1));
    // x dy -> d(yx) - y dx
    CHECK(ops.kappa(Form::basis(key(A, "x", {"y"}))) ==
          Form::basis(key(A, "1", {"yx"})) - Form::basis(key(A, "y", {"x"})));
}

TEST_CASE("Connes differential examples") {
    FinDimAlgebra A = free_xy(3);
    FormOps ops(A);
    Form x = Form::basis(key(A, "x", {}));
    CHECK(ops.connes_B(x) == Form::basis(key(A, "1", {"x"})));
    CHECK(ops.connes_B(ops.connes_B(x)).zero());
    CHECK(ops.connes_B(Form::basis(key(A, "x", {"y"}))) ==
          Form::basis(key(A, "1", {"x", "y"})) - Form::basis(key(A, "1", {"y", "x"})));
}

TEST_CASE("contraction examples") {
    FinDimAlgebra A = free_xy(3);
    FormOps ops(A);
    CHECK(ops.iota_delta(Form::basis(key(A, "x", {"y"}))) ==
          Form::basis(key(A, "xy", {})) - Form::basis(key(A, "yx", {})));
    CHECK(ops.iota_delta(Form::basis(key(A, "1", {"x"}))).zero());
    CHECK(ops.iota_delta(Form::basis(key(A, "1", {"x", "y"}))) ==
          Form::basis(key(A, "1", {"yx"})) - Form::basis(key(A, "1", {"xy"})));
}

TEST_CASE("operator identity sweep") {
    struct Case {
        const char* name;
        FinDimAlgebra A;
        int n_max;
    };
    std::vector<Case> cases;
    cases.push_back({"ground field", ground_field(), 4});
    cases.push_back({"dual numbers", dual_numbers(), 4});
    cases.push_back({"x^3 = 0", x_cubed(), 4});
    cases.push_back({"free, cap 2", free_xy(2), 4});
    cases.push_back({"free, cap 3", free_xy(3), 3});
    for (auto& c : cases) {
        CAPTURE(c.name);
        IdentitySweepResult r = sweep_form_identities(c.A, c.n_max);
        CAPTURE(r.witness);
        CHECK(r.ok);
        CHECK(r.checked > 0);
    }
}

TEST_CASE("general contraction specializes to the distinguished one") {
    for (FinDimAlgebra A : {free_xy(2), x_cubed()}) {
        FormOps ops(A);
        DoubleDerivation delta = DoubleDerivation::distinguished(A);
        for (int n = 1; n <= 3; ++n)
            for_each_form_key(A, n, [&](const FormKey& k) {
                Form w = Form::basis(k);
                CHECK(ops.iota_theta(w, delta) == ops.iota_delta(w));
                return true;
            });
        DoubleDerivation zero = DoubleDerivation::zero(A);
        CHECK(ops.iota_theta(Form::basis(key(A, "x", {"x", "x"})), zero).zero());
    }
}

TEST_CASE("contraction against a constant-valued derivation") {
    // Theta(x) = 1 (x) 1 on the free algebra on x. With the commutator-form
    // sign convention the degree-1 contraction of dx is -1.
    FinDimAlgebra A = free_x(3);
    FormOps ops(A);
    DoubleDerivation th = DoubleDerivation::from_generators(A, {{{0, 0, Rat(1)}}});
    CHECK(check_double_derivation(A, th).pass());
    Form got = ops.iota_theta(Form::basis(key(A, "1", {"x"})), th);
    CHECK(got == Form::basis(key(A, "1", {})) * Rat(-1));
    // x dx: -(1 * x * 1) = -x.
    CHECK(ops.iota_theta(Form::basis(key(A, "x", {"x"})), th) ==
          Form::basis(key(A, "x", {})) * Rat(-1));
}

TEST_CASE("Lie derivative along the distinguished derivation dies in commutators") {
    FinDimAlgebra A = free_xy(2);
    FormOps ops(A);
    DoubleDerivation delta = DoubleDerivation::distinguished(A);
    std::mt19937 rng(20240817);
    for (int n = 1; n <= 3; ++n)
        for (int rep = 0; rep < 4; ++rep) {
            Form w = random_form(A, n, n + 2, rng);
            Form lw = ops.lie_theta(w, delta);
            CHECK(lw.degree == n);
            CHECK(in_commutator_span(A, ops, lw));
        }
}

TEST_CASE("Cartan relations for random verified derivations") {
    FinDimAlgebra A = free_xy(4);
    FormOps ops(A);
    std::mt19937 rng(97531);
    DoubleDerivation th = random_theta(A, rng);
    DoubleDerivation ph = random_theta(A, rng);
    REQUIRE(th.verified);
    REQUIRE(ph.verified);
    for (int n = 0; n <= 3; ++n)
        for (int rep = 0; rep < 4; ++rep) {
            // Weight cap = algebra cap: every product stays exact.
            Form w = random_form(A, n, 4, rng);
            // Lie derivative commutes with d.
            CHECK(ops.lie_theta(ops.d(w), th) == ops.d(ops.lie_theta(w, th)));
            // Anticommutator of contractions vanishes modulo commutators.
            if (n >= 2) {
                Form ac = ops.iota_theta(ops.iota_theta(w, th), ph) +
                          ops.iota_theta(ops.iota_theta(w, ph), th);
                CHECK(in_commutator_span(A, ops, ac));
            }
        }
}

TEST_CASE("double derivation verification") {
    for (FinDimAlgebra A : {free_xy(2), dual_numbers(), x_cubed(), ground_field()}) {
        CHECK(check_double_derivation(A, DoubleDerivation::distinguished(A)).pass());
        CHECK(check_double_derivation(A, DoubleDerivation::zero(A)).pass());
    }
    // x -> x (x) x is not a double derivation on the free algebra: the square
    // x*x violates the Leibniz rule. The witness names an offending product.
    FinDimAlgebra A = free_xy(2);
    DoubleDerivation bad;
    bad.values.resize(A.dim());
    int x = idx(A, "x");
    bad.values[x].emplace_back(x, x, Rat(1));
    DoubleDerivationReport rep = check_double_derivation(A, bad);
    CHECK(!rep.pass());
    CHECK(!rep.witness.empty());
}

TEST_CASE("Leibniz extension from generator values") {
    FinDimAlgebra A = free_xy(3);
    // Theta(x) = 1 (x) 1, Theta(y) = 0; then Theta(xy) = 1 (x) y.
    DoubleDerivation th = DoubleDerivation::from_generators(A, {{{0, 0, Rat(1)}}, {}});
    CHECK(check_double_derivation(A, th).pass());
    int xy = idx(A, "xy");
    REQUIRE(th.values[xy].size() == 1);
    auto [l, r, c] = th.values[xy][0];
    CHECK(l == 0);
    CHECK(r == idx(A, "y"));
    CHECK(c == 1);
}
