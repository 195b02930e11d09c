#include "ncdr/spaces.hpp"

#include "ncdr/identity_suite.hpp"

#include <set>

namespace ncdr {

RatVec FormSpace::vec(const Form& f) const {
    RatVec v(keys.size(), Rat(0));
    for (const auto& [k, c] : f.terms) {
        auto it = index.find(k);
        if (it == index.end())
            throw InternalError("form has a component outside the target space");
        v[it->second] = c;
    }
    return v;
}

Form FormSpace::form(const RatVec& v) const {
    Form f(degree);
    for (std::size_t i = 0; i < v.size(); ++i) f.add(keys[i], v[i]);
    return f;
}

FormSpace form_space(const FinDimAlgebra& A, int degree, int weight, bool reduced) {
    FormSpace s;
    s.A = &A;
    s.degree = degree;
    s.weight = weight;
    s.reduced = reduced;
    for_each_form_key(A, degree, [&](const FormKey& k) {
        if (reduced && degree == 0 && k[0] == 0) return true;
        if (weight >= 0) {
            int w = 0;
            for (unsigned char c : k) w += A.weight(c);
            if (w != weight) return true;
        }
        s.index.emplace(k, static_cast<int>(s.keys.size()));
        s.keys.push_back(k);
        return true;
    });
    return s;
}

Mat operator_matrix(const FormSpace& from, const FormSpace& to,
                    const std::function<Form(const Form&)>& op) {
    Mat m(to.dim(), from.dim());
    for (int j = 0; j < from.dim(); ++j) {
        Form img = op(Form::basis(from.keys[j]));
        if (to.reduced && to.degree == 0) img.terms.erase(FormKey(1, '\0'));
        RatVec col = to.vec(img);
        for (int i = 0; i < to.dim(); ++i) m.at(i, j) = col[i];
    }
    return m;
}

QuotientSpace quotient_by(const FormSpace& space, const std::vector<RatVec>& relations) {
    int n = space.dim();
    // Row-echelon basis of the relation span; pivots become eliminated
    // coordinates, free coordinates index the quotient.
    Mat rows(static_cast<int>(relations.size()), n);
    for (std::size_t i = 0; i < relations.size(); ++i) rows.a[i] = relations[i];
    Rref rr = rref(std::move(rows));
    std::vector<bool> is_pivot(n, false);
    for (int c : rr.pivot_cols) is_pivot[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    int q = static_cast<int>(free_cols.size());

    QuotientSpace out;
    out.ambient = space;
    out.projection = Mat(q, n);
    // Reduction of e_c: subtract echelon rows to kill pivot coordinates; the
    // result of reducing e_{pivot p} is minus the free part of row p.
    for (int i = 0; i < q; ++i) out.projection.at(i, free_cols[i]) = 1;
    for (int p = 0; p < rr.rank; ++p) {
        int pc = rr.pivot_cols[p];
        for (int i = 0; i < q; ++i) out.projection.at(i, pc) = -rr.m.at(p, free_cols[i]);
    }
    out.section = Mat(n, q);
    for (int i = 0; i < q; ++i) out.section.at(free_cols[i], i) = 1;
    return out;
}

QuotientSpace natural_quotient(const FinDimAlgebra& A, int degree, int weight) {
    FormSpace s = form_space(A, degree, weight);
    FormOps ops(A);
    // Relations: image of b from degree+1 (same weight slice).
    FormSpace up = form_space(A, degree + 1, weight);
    std::vector<RatVec> rel;
    for (const auto& k : up.keys) {
        Form img = ops.b(Form::basis(k));
        if (!img.zero()) rel.push_back(s.vec(img));
    }
    QuotientSpace qs = quotient_by(s, rel);

    // The same subspace must be spanned by commutators [a, w]. For weighted
    // slices commutators against weight-w generators leave the slice, so the
    // cross-check enumerates commutators landing in the slice directly.
    std::vector<RatVec> comm;
    for (int a = 1; a < A.dim(); ++a) {
        int aw = A.graded ? A.weight(a) : 0;
        if (weight >= 0 && weight - aw < 0) continue;
        FormSpace lower =
            weight >= 0 ? form_space(A, degree, weight - aw) : s;
        for (const auto& k : lower.keys) {
            Form w = Form::basis(k);
            Form c = ops.left_mul(sv_unit(a), w) - ops.right_mul(w, a);
            if (!c.zero()) comm.push_back(s.vec(c));
        }
    }
    Mat mb = from_columns(rel, s.dim());
    Mat mc = from_columns(comm, s.dim());
    int rb = rank(mb), rc = rank(mc);
    std::vector<RatVec> both = rel;
    both.insert(both.end(), comm.begin(), comm.end());
    if (rb != rc || rank(from_columns(both, s.dim())) != rb)
        throw InternalError("boundary image differs from the commutator span");
    return qs;
}

QuotientSpace dr_space(const FinDimAlgebra& A, int degree, int weight) {
    QuotientSpace nat = natural_quotient(A, degree, weight);
    if (degree == 0) return nat; // kappa = Id on degree 0
    FormOps ops(A);
    Mat K = nat.descend(operator_matrix(nat.ambient, nat.ambient,
                                        [&](const Form& w) { return ops.kappa(w); }));
    int n = nat.dim();
    // Averaging projector over the cyclic action (kappa^degree = Id here).
    Mat e(n, n);
    Mat pw = Mat::identity(n);
    for (int i = 0; i < degree; ++i) {
        e = e + pw;
        pw = K * pw;
    }
    if (!(pw == Mat::identity(n)))
        throw InternalError("kappa is not of finite order on the natural quotient");
    Rat inv = Rat(1) / Rat(degree);
    for (auto& row : e.a)
        for (auto& v : row) v *= inv;
    // DR = image of the averaging projector inside Omega_nat.
    std::vector<int> piv = column_space_pivots(e);
    std::vector<RatVec> cols;
    for (int c : piv) {
        RatVec col(n);
        for (int i = 0; i < n; ++i) col[i] = e.at(i, c);
        cols.push_back(col);
    }
    Mat sec2 = from_columns(cols, n);
    auto proj2 = solve_many(sec2, e);
    if (!proj2) throw InternalError("averaging projector image basis is inconsistent");
    QuotientSpace out;
    out.ambient = nat.ambient;
    out.projection = *proj2 * nat.projection;
    out.section = nat.section * sec2;
    return out;
}

HarmonicDecomposition harmonic_projector(const FinDimAlgebra& A, int degree, int weight) {
    HarmonicDecomposition h;
    h.space = form_space(A, degree, weight, /*reduced=*/true);
    FormOps ops(A);
    Mat K = operator_matrix(h.space, h.space, [&](const Form& w) {
        Form img = ops.kappa(w);
        if (degree == 0) img.terms.erase(FormKey(1, '\0'));
        return img;
    });
    int n = h.space.dim();
    Mat M = Mat::identity(n) - K;
    M = M * M;
    std::vector<RatVec> ker = kernel_basis(M);
    std::vector<int> piv = column_space_pivots(M);
    std::vector<RatVec> cols = ker;
    for (int c : piv) {
        RatVec col(n);
        for (int i = 0; i < n; ++i) col[i] = M.at(i, c);
        cols.push_back(col);
    }
    if (static_cast<int>(cols.size()) != n)
        throw InternalError("kernel and image of (Id-kappa)^2 do not fill the space");
    Mat C = from_columns(cols, n);
    auto Cinv = inverse(C);
    if (!Cinv) throw InternalError("kernel and image of (Id-kappa)^2 are not complementary");
    Mat D(n, n);
    for (std::size_t i = 0; i < ker.size(); ++i) D.at(static_cast<int>(i), static_cast<int>(i)) = 1;
    h.P = C * D * *Cinv;
    h.Pperp = Mat::identity(n) - h.P;
    if (!((h.P * h.P) == h.P))
        throw InternalError("harmonic projector is not idempotent");
    return h;
}

std::vector<Form> commutator_subspace(const FinDimAlgebra& A, int degree, int weight) {
    FormOps ops(A);
    auto key_weight = [&](const FormKey& k) {
        int w = 0;
        for (unsigned char c : k) w += A.weight(c);
        return w;
    };
    std::vector<Form> gens;
    for (int p = 0; 2 * p <= degree; ++p) {
        int q = degree - p;
        for_each_form_key(A, p, [&](const FormKey& ku) {
            for_each_form_key(A, q, [&](const FormKey& kv) {
                if (weight >= 0 && key_weight(ku) + key_weight(kv) != weight) return true;
                Form u = Form::basis(ku);
                Form v = Form::basis(kv);
                Form g = ops.mul(u, v);
                Form vu = ops.mul(v, u);
                vu *= Rat((p * q) % 2 != 0 ? -1 : 1);
                g -= vu;
                if (!g.zero()) gens.push_back(g);
                return true;
            });
            return true;
        });
    }
    // Keep the generators at the pivot columns of the span.
    std::map<FormKey, int> rows;
    for (const auto& g : gens)
        for (const auto& [k, c] : g.terms) rows.emplace(k, static_cast<int>(rows.size()));
    Mat m(static_cast<int>(rows.size()), static_cast<int>(gens.size()));
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (const auto& [k, c] : gens[j].terms) m.at(rows.at(k), static_cast<int>(j)) = c;
    std::vector<Form> out;
    for (int j : column_space_pivots(m)) out.push_back(gens[static_cast<std::size_t>(j)]);
    return out;
}

bool in_commutator_subspace(const FinDimAlgebra& A, const Form& f) {
    if (f.zero()) return true;
    int n = f.degree;
    FormOps ops(A);
    auto key_weight = [&](const FormKey& k) {
        int w = 0;
        for (unsigned char c : k) w += A.weight(c);
        return w;
    };
    // b and Id - kappa both preserve total weight, so when the algebra is
    // graded only the weights present in f can contribute to a spanning set.
    std::set<int> weights;
    if (A.graded)
        for (const auto& [k, c] : f.terms) weights.insert(key_weight(k));
    std::vector<Form> gens;
    for_each_form_key(A, n, [&](const FormKey& k) {
        if (A.graded && !weights.count(key_weight(k))) return true;
        Form w = Form::basis(k);
        Form g = w - ops.kappa(w);
        if (!g.zero()) gens.push_back(g);
        return true;
    });
    for_each_form_key(A, n + 1, [&](const FormKey& k) {
        if (A.graded && !weights.count(key_weight(k))) return true;
        Form g = ops.b(Form::basis(k));
        if (!g.zero()) gens.push_back(g);
        return true;
    });
    std::map<FormKey, int> rows;
    auto row = [&](const FormKey& k) {
        return rows.emplace(k, static_cast<int>(rows.size())).first->second;
    };
    for (const auto& g : gens)
        for (const auto& [k, c] : g.terms) row(k);
    for (const auto& [k, c] : f.terms) row(k);
    Mat without(static_cast<int>(rows.size()), static_cast<int>(gens.size()));
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (const auto& [k, c] : gens[j].terms) without.at(row(k), static_cast<int>(j)) = c;
    Mat with(static_cast<int>(rows.size()), static_cast<int>(gens.size()) + 1);
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (const auto& [k, c] : gens[j].terms) with.at(row(k), static_cast<int>(j)) = c;
    for (const auto& [k, c] : f.terms) with.at(row(k), static_cast<int>(gens.size())) = c;
    return rank(with) == rank(without);
}

} // namespace ncdr
