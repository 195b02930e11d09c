#include "ncdr/rep.hpp"

#include <algorithm>

namespace ncdr {

void CommForm::add(const Key& k, const Rat& c) {
    if (c == 0) return;
    Rat& r = terms[k];
    r += c;
    if (r == 0) terms.erase(k);
}

CommForm CommForm::operator+(const CommForm& o) const {
    CommForm out = *this;
    for (const auto& [k, c] : o.terms) out.add(k, c);
    return out;
}

CommForm CommForm::operator-(const CommForm& o) const {
    CommForm out = *this;
    for (const auto& [k, c] : o.terms) out.add(k, -c);
    return out;
}

CommForm CommForm::scaled(const Rat& c) const {
    CommForm out;
    if (c == 0) return out;
    for (const auto& [k, v] : terms) out.terms.emplace(k, v * c);
    return out;
}

namespace {

// Merge two strictly increasing odd-variable lists; sign counts the
// transpositions, zero on a repeated variable.
bool merge_wedge(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out,
                 int& sign) {
    out.clear();
    sign = 1;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j] < a[i]) {
            if ((a.size() - i) % 2 == 1) sign = -sign;
            out.push_back(b[j++]);
        } else {
            return false; // repeated odd variable
        }
    }
    return true;
}

std::vector<int> merged_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Insert one odd variable at the front, then into sorted position.
bool insert_front(const std::vector<int>& w, int v, std::vector<int>& out, int& sign) {
    return merge_wedge({v}, w, out, sign);
}

} // namespace

CommForm RepCtx::mul(const CommForm& l, const CommForm& r) const {
    CommForm out;
    for (const auto& [lk, lc] : l.terms)
        for (const auto& [rk, rc] : r.terms) {
            std::vector<int> wedge;
            int sign;
            if (!merge_wedge(lk.second, rk.second, wedge, sign)) continue;
            // even part commutes past the odd part freely
            out.add({merged_sorted(lk.first, rk.first), std::move(wedge)}, lc * rc * sign);
        }
    return out;
}

CommForm RepCtx::d(const CommForm& f) const {
    CommForm out;
    for (const auto& [k, c] : f.terms) {
        for (std::size_t p = 0; p < k.first.size(); ++p) {
            int v = k.first[p];
            if (is_gvar(v)) continue;
            if (p > 0 && k.first[p - 1] == v) continue; // handle multiplicity once
            long mult = std::count(k.first.begin(), k.first.end(), v);
            std::vector<int> poly = k.first;
            poly.erase(poly.begin() + static_cast<long>(p));
            std::vector<int> wedge;
            int sign;
            if (!insert_front(k.second, v, wedge, sign)) continue;
            out.add({std::move(poly), std::move(wedge)}, c * Rat(mult) * sign);
        }
    }
    return out;
}

CommForm RepCtx::contract(int ke, int le, const CommForm& f) const {
    CommForm out;
    for (const auto& [k, c] : f.terms) {
        for (std::size_t p = 0; p < k.second.size(); ++p) {
            int v = k.second[p];
            int j = v % dv, i = (v / dv) % dv, a = v / (dv * dv);
            Rat sgn((p % 2 == 0) ? 1 : -1);
            std::vector<int> wedge = k.second;
            wedge.erase(wedge.begin() + static_cast<long>(p));
            // i(d xhat^a_{ij}) = [e_{ke,le}, xhat^a]_{ij}
            if (i == ke) {
                std::vector<int> poly = k.first;
                poly.insert(std::upper_bound(poly.begin(), poly.end(), xvar(a, le, j)),
                            xvar(a, le, j));
                out.add({std::move(poly), wedge}, c * sgn);
            }
            if (j == le) {
                std::vector<int> poly = k.first;
                poly.insert(std::upper_bound(poly.begin(), poly.end(), xvar(a, i, ke)),
                            xvar(a, i, ke));
                out.add({std::move(poly), std::move(wedge)}, -c * sgn);
            }
        }
    }
    return out;
}

CommForm RepCtx::lie(int k, int l, const CommForm& f) const {
    return d(contract(k, l, f)) + contract(k, l, d(f));
}

CommForm RepCtx::d_g(const CommForm& f) const {
    CommForm out;
    for (int k = 0; k < dv; ++k)
        for (int l = 0; l < dv; ++l) {
            CommForm g;
            g.add({{gvar(k, l)}, {}}, 1);
            out = out + mul(contract(k, l, f), g);
        }
    return out;
}

bool RepCtx::is_basic(const CommForm& f) const {
    for (int k = 0; k < dv; ++k)
        for (int l = 0; l < dv; ++l)
            if (!contract(k, l, f).zero() || !lie(k, l, f).zero()) return false;
    return true;
}

std::string RepCtx::str(const CommForm& f) const {
    if (f.zero()) return "0";
    auto vname = [&](int v) {
        if (is_gvar(v)) {
            int r = v - ng * dv * dv;
            return "g(" + std::to_string(r / dv + 1) + "," + std::to_string(r % dv + 1) + ")";
        }
        int j = v % dv, i = (v / dv) % dv, a = v / (dv * dv);
        return "x" + std::to_string(a) + "(" + std::to_string(i + 1) + "," +
               std::to_string(j + 1) + ")";
    };
    std::string out;
    for (const auto& [k, c] : f.terms) {
        if (!out.empty()) out += " + ";
        out += c.get_str();
        for (int v : k.first) out += "*" + vname(v);
        for (int v : k.second) out += "*d" + vname(v);
    }
    return out;
}

MatForm mat_identity(const RepCtx& c) {
    MatForm m(static_cast<std::size_t>(c.dv * c.dv));
    for (int i = 0; i < c.dv; ++i) m[static_cast<std::size_t>(i * c.dv + i)] = CommForm::one();
    return m;
}

MatForm mat_mul(const RepCtx& c, const MatForm& l, const MatForm& r) {
    MatForm out(static_cast<std::size_t>(c.dv * c.dv));
    for (int i = 0; i < c.dv; ++i)
        for (int j = 0; j < c.dv; ++j) {
            CommForm acc;
            for (int k = 0; k < c.dv; ++k)
                acc = acc + c.mul(l[static_cast<std::size_t>(i * c.dv + k)],
                                  r[static_cast<std::size_t>(k * c.dv + j)]);
            out[static_cast<std::size_t>(i * c.dv + j)] = std::move(acc);
        }
    return out;
}

MatForm mat_add(const MatForm& l, const MatForm& r) {
    MatForm out(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) out[i] = l[i] + r[i];
    return out;
}

MatForm mat_d(const RepCtx& c, const MatForm& m) {
    MatForm out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = c.d(m[i]);
    return out;
}

CommForm mat_trace(const RepCtx& c, const MatForm& m) {
    CommForm out;
    for (int i = 0; i < c.dv; ++i) out = out + m[static_cast<std::size_t>(i * c.dv + i)];
    return out;
}

RepEval::RepEval(const FinDimAlgebra& A, int dim_v, int t_letter)
    : A_(&A), ctx_(dim_v, static_cast<int>(A.gens.names.size()) - (t_letter >= 0 ? 1 : 0)),
      t_(t_letter) {
    if (!A.rs.rules.empty()) throw InternalError("evaluation requires a free presentation");
}

MatForm RepEval::coordinate_matrix() const {
    MatForm m(static_cast<std::size_t>(ctx_.dv * ctx_.dv));
    for (int i = 0; i < ctx_.dv; ++i)
        for (int j = 0; j < ctx_.dv; ++j)
            m[static_cast<std::size_t>(i * ctx_.dv + j)].add({{ctx_.gvar(i, j)}, {}}, 1);
    return m;
}

MatForm RepEval::ev(const Word& w) const {
    MatForm out = mat_identity(ctx_);
    for (char ch : w) {
        int letter = ch;
        MatForm m(static_cast<std::size_t>(ctx_.dv * ctx_.dv));
        if (letter == t_) {
            m = coordinate_matrix();
        } else {
            int a = letter - (t_ >= 0 && letter > t_ ? 1 : 0);
            for (int i = 0; i < ctx_.dv; ++i)
                for (int j = 0; j < ctx_.dv; ++j)
                    m[static_cast<std::size_t>(i * ctx_.dv + j)].add({{ctx_.xvar(a, i, j)}, {}}, 1);
        }
        out = mat_mul(ctx_, out, m);
    }
    return out;
}

MatForm RepEval::ev(const SparseVec& v) const {
    MatForm out(static_cast<std::size_t>(ctx_.dv * ctx_.dv));
    for (const auto& [i, c] : v) {
        MatForm m = ev(A_->basis_words[static_cast<std::size_t>(i)]);
        for (std::size_t e = 0; e < out.size(); ++e) out[e] = out[e] + m[e].scaled(c);
    }
    return out;
}

MatForm RepEval::ev(const NCPoly& p) const { return ev(A_->coords(p)); }

MatForm RepEval::ev_key(const FormKey& k) const {
    MatForm out = ev(A_->basis_words[static_cast<std::size_t>(static_cast<unsigned char>(k[0]))]);
    for (std::size_t s = 1; s < k.size(); ++s) {
        MatForm m = ev(A_->basis_words[static_cast<std::size_t>(static_cast<unsigned char>(k[s]))]);
        out = mat_mul(ctx_, out, mat_d(ctx_, m));
    }
    return out;
}

MatForm RepEval::ev_omega(const Form& f) const {
    MatForm out(static_cast<std::size_t>(ctx_.dv * ctx_.dv));
    for (const auto& [k, c] : f.terms) {
        MatForm m = ev_key(k);
        for (std::size_t e = 0; e < out.size(); ++e) out[e] = out[e] + m[e].scaled(c);
    }
    return out;
}

CommForm RepEval::trace_ev(const Form& f) const { return mat_trace(ctx_, ev_omega(f)); }

CommForm RepEval::trace_ev(const ExtendedPiece& x) const {
    CommForm out;
    MatForm that = coordinate_matrix();
    for (const auto& [w, c] : x.terms) {
        MatForm m = mat_identity(ctx_);
        for (const FormKey& slot : w) m = mat_mul(ctx_, mat_mul(ctx_, m, ev_key(slot)), that);
        out = out + mat_trace(ctx_, m).scaled(c);
    }
    return out;
}

RepThmReport verify_rep_thm(int dim_v, int cap, int max_degree, int max_slots) {
    RepThmReport r;
    r.dim_v = dim_v;
    AlgebraPresentation p;
    p.gens = {{"x", "y"}, {1, 1}};
    p.degree_cap = cap;
    FinDimAlgebra A = build_findim(p, cap);
    RepEval E(A, dim_v);
    FormOps ops(A);
    ExtendedOps ext(A);
    RepCtx ctx = E.ctx();

    // Multiplicativity on all basis word pairs that stay under the cap.
    for (int i = 0; i < A.dim(); ++i)
        for (int j = 0; j < A.dim(); ++j) {
            Word w = A.basis_words[static_cast<std::size_t>(i)] +
                     A.basis_words[static_cast<std::size_t>(j)];
            if (A.gens.weight_of_word(w) > cap) continue;
            ++r.morphism_pairs;
            if (!(mat_mul(ctx, E.ev(A.basis_words[static_cast<std::size_t>(i)]),
                          E.ev(A.basis_words[static_cast<std::size_t>(j)])) == E.ev(w))) {
                r.morphism_ok = false;
                if (r.witness.empty()) r.witness = "evaluation not multiplicative";
            }
        }

    // Trace kills graded commutators and is rotation invariant.
    for (int n = 0; n <= max_degree; ++n)
        for (int w = 0; w <= cap; ++w) {
            for (const Form& f : commutator_subspace(A, n, w)) {
                ++r.commutator_samples;
                if (!E.trace_ev(f).zero()) {
                    r.commutator_ok = false;
                    if (r.witness.empty()) r.witness = "trace survives a commutator";
                }
            }
            if (n >= 1) {
                FormSpace sp = form_space(A, n, w);
                for (const FormKey& k : sp.keys) {
                    Form f = Form::basis(k);
                    ++r.commutator_samples;
                    if (!(E.trace_ev(ops.kappa(f)) == E.trace_ev(f))) {
                        r.commutator_ok = false;
                        if (r.witness.empty()) r.witness = "trace not rotation invariant";
                    }
                }
            }
        }

    // Equivariant square: slot words against the coordinate differential.
    {
        std::vector<FormKey> slots;
        for (int n = 0; n <= max_degree; ++n)
            for (int w = 0; w <= 2; ++w)
                for (const FormKey& k : form_space(A, n, w).keys) slots.push_back(k);
        std::vector<ExtWord> words;
        for (const FormKey& a : slots) {
            if (form_degree(a) <= max_degree) words.push_back({a});
            if (max_slots >= 2)
                for (const FormKey& b : slots)
                    if (form_degree(a) + form_degree(b) <= max_degree) words.push_back({a, b});
        }
        for (const ExtWord& w : words) {
            ExtendedPiece x = ext.piece(w);
            if (x.zero()) continue;
            ++r.equivariant_samples;
            CommForm lhs = E.trace_ev(ext.d(x)) + E.trace_ev(ext.i_delta(x));
            CommForm tr = E.trace_ev(x);
            CommForm rhs = ctx.d(tr) + ctx.d_g(tr);
            if (!(lhs == rhs)) {
                r.equivariant_ok = false;
                if (r.witness.empty())
                    r.witness = "equivariant square fails on " + ext.str(x);
            }
        }
    }

    // Contraction kernel classes are basic and intertwine the cyclic
    // differential with (degree + 1) de Rham.
    for (int n = 0; n <= max_degree; ++n)
        for (int w = 1; w <= cap - 1; ++w) {
            FormSpace sp = form_space(A, n, w);
            if (sp.dim() == 0) continue;
            std::vector<RatVec> ker;
            if (n == 0) {
                for (int i = 0; i < sp.dim(); ++i) {
                    RatVec e(static_cast<std::size_t>(sp.dim()));
                    e[static_cast<std::size_t>(i)] = 1;
                    ker.push_back(std::move(e));
                }
            } else {
                FormSpace below = form_space(A, n - 1, w);
                Mat M = operator_matrix(sp, below, [&](const Form& f) { return ops.iota_delta(f); });
                ker = kernel_basis(M);
            }
            for (const RatVec& v : ker) {
                Form f = sp.form(v);
                ++r.homology_samples;
                CommForm tr = E.trace_ev(f);
                if (!ctx.is_basic(tr)) {
                    r.basic_ok = false;
                    if (r.witness.empty()) r.witness = "kernel class not basic";
                }
                if (!(E.trace_ev(ops.connes_B(f)) == ctx.d(tr).scaled(n + 1))) {
                    r.homology_ok = false;
                    if (r.witness.empty()) r.witness = "cyclic differential mismatch";
                }
            }
        }
    return r;
}

} // namespace ncdr
