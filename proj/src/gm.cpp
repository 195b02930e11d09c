#include "ncdr/gm.hpp"

#include <functional>
#include <random>
#include <sstream>

namespace ncdr {

namespace {

int uc(char c) { return static_cast<unsigned char>(c); }

} // namespace

void RelForm::add(const RelKey& k, const Rat& c) {
    if (is_zero(c)) return;
    auto it = terms.find(k);
    if (it == terms.end()) terms.emplace(k, c);
    else {
        it->second += c;
        if (is_zero(it->second)) terms.erase(it);
    }
}

RelForm RelForm::operator+(const RelForm& o) const {
    RelForm r = *this;
    for (const auto& [k, c] : o.terms) r.add(k, c);
    return r;
}

RelForm RelForm::operator-(const RelForm& o) const {
    RelForm r = *this;
    for (const auto& [k, c] : o.terms) r.add(k, -c);
    return r;
}

RelForm RelForm::scaled(const Rat& c) const {
    RelForm r;
    for (const auto& [k, v] : terms) r.add(k, v * c);
    return r;
}

RelForm RelForm::dc_free() const {
    RelForm r;
    for (const auto& [k, c] : terms)
        if (!k.dc) r.add(k, c);
    return r;
}

RelForm RelForm::dc_part() const {
    RelForm r;
    for (const auto& [k, c] : terms)
        if (k.dc) r.add(RelKey{k.e, 0, k.k}, c);
    return r;
}

RelativeFamily::RelativeFamily(const AlgebraPresentation& pres, int c_letter, int cap)
    : A_(build_findim(pres, cap)), ops_(A_), c_(c_letter), cap_(cap) {
    if (c_ < 0 || c_ >= static_cast<int>(pres.gens.names.size()))
        throw InternalError("base letter out of range");
    if (!A_.graded) throw InternalError("relative families need a graded algebra");
    cw_ = pres.gens.weights[static_cast<std::size_t>(c_)];

    for (int i = 0; i < A_.dim(); ++i)
        if (A_.basis_words[static_cast<std::size_t>(i)].find(static_cast<char>(c_)) == Word::npos) {
            cfree_pos_[i] = static_cast<int>(cfree_.size());
            cfree_.push_back(i);
        }
    if (cfree_.empty() || cfree_[0] != 0) throw InternalError("unit missing from the base-free basis");

    // Multiply each base-free basis element by every power of the base
    // variable that fits under the cap; the products must enumerate the whole
    // basis with coefficient one for A to be a free module over the base.
    const SparseVec cv = A_.coords(NCPoly::word(Word(1, static_cast<char>(c_))));
    decomp_.assign(static_cast<std::size_t>(A_.dim()), {-1, -1});
    int covered = 0;
    for (int pos = 0; pos < base_free_count(); ++pos) {
        SparseVec v = sv_unit(cfree_[static_cast<std::size_t>(pos)]);
        for (int e = 0; e * cw_ + base_free_weight(pos) <= cap_; ++e) {
            if (e > 0) v = A_.mul(cv, v);
            if (v.size() != 1 || !(v[0].second == Rat(1)))
                throw InternalError("algebra is not a free module over the base");
            int idx = v[0].first;
            if (decomp_[static_cast<std::size_t>(idx)].first >= 0)
                throw InternalError("algebra is not a free module over the base");
            decomp_[static_cast<std::size_t>(idx)] = {e, pos};
            comp_idx_[{e, pos}] = idx;
            ++covered;
        }
    }
    if (covered != A_.dim()) throw InternalError("algebra is not a free module over the base");
    free_ok_ = true;
}

int RelativeFamily::base_free_weight(int pos) const {
    return A_.weight(cfree_[static_cast<std::size_t>(pos)]);
}

std::pair<int, int> RelativeFamily::decompose(int idx) const {
    return decomp_[static_cast<std::size_t>(idx)];
}

void RelativeFamily::project_key(const FormKey& key, const Rat& coeff, RelForm& out) const {
    const int m = form_degree(key);
    std::vector<int> e(static_cast<std::size_t>(m) + 1), pos(static_cast<std::size_t>(m) + 1);
    int etot = 0;
    for (int i = 0; i <= m; ++i) {
        auto [ei, pi] = decomp_[static_cast<std::size_t>(uc(key[static_cast<std::size_t>(i)]))];
        e[static_cast<std::size_t>(i)] = ei;
        pos[static_cast<std::size_t>(i)] = pi;
        etot += ei;
    }
    // branch keeping every differential: base powers move to the front freely
    bool alive = true;
    for (int i = 1; i <= m; ++i)
        if (pos[static_cast<std::size_t>(i)] == 0) alive = false;
    if (alive) {
        FormKey k(static_cast<std::size_t>(m) + 1, '\0');
        for (int i = 0; i <= m; ++i) k[static_cast<std::size_t>(i)] = static_cast<char>(pos[static_cast<std::size_t>(i)]);
        out.add(RelKey{etot, 0, k}, coeff);
    }
    // branches where slot i surrenders its differential to the base variable;
    // two base differentials cancel, so at most one slot does
    for (int i = 1; i <= m; ++i) {
        if (e[static_cast<std::size_t>(i)] == 0) continue;
        bool ok = true;
        for (int j = 1; j <= m; ++j)
            if (j != i && pos[static_cast<std::size_t>(j)] == 0) ok = false;
        if (!ok) continue;
        // the slot's base-free value is absorbed into the preceding word,
        // then the remaining differentials are reattached
        FormKey pk(1, static_cast<char>(cfree_[static_cast<std::size_t>(pos[0])]));
        for (int j = 1; j < i; ++j) pk += static_cast<char>(cfree_[static_cast<std::size_t>(pos[static_cast<std::size_t>(j)])]);
        Form q = ops_.right_mul(Form::basis(pk), cfree_[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])]);
        FormKey tail;
        for (int j = i + 1; j <= m; ++j) tail += static_cast<char>(cfree_[static_cast<std::size_t>(pos[static_cast<std::size_t>(j)])]);
        Rat factor = coeff * Rat(e[static_cast<std::size_t>(i)]);
        if ((m - i) % 2) factor = -factor; // move the base differential past the tail
        if ((m - 1) % 2) factor = -factor; // then to its normal-form position
        RelForm sub;
        for (const auto& [qk, qc] : q.terms) project_key(qk + tail, qc, sub);
        for (const auto& [rk, rc] : sub.terms) {
            if (rk.dc) continue;
            out.add(RelKey{rk.e + etot - 1, 1, rk.k}, rc * factor);
        }
    }
}

RelForm RelativeFamily::project(const Form& f) const {
    RelForm out;
    for (const auto& [k, c] : f.terms) project_key(k, c, out);
    return out;
}

Form RelativeFamily::lift_key(const RelKey& k, const Rat& c) const {
    const int m = form_degree(k.k);
    auto it = comp_idx_.find({k.e, uc(k.k[0])});
    if (it == comp_idx_.end()) throw InternalError("base power exceeds the cap");
    FormKey key(1, static_cast<char>(it->second));
    for (int i = 1; i <= m; ++i)
        key += static_cast<char>(cfree_[static_cast<std::size_t>(uc(k.k[static_cast<std::size_t>(i)]))]);
    Rat cc = c;
    if (k.dc) {
        key += static_cast<char>(comp_idx_.at({1, 0}));
        if (m % 2) cc = -cc;
    }
    return Form::basis(key, cc);
}

Form RelativeFamily::lift(const RelForm& x) const {
    Form out;
    bool first = true;
    for (const auto& [k, c] : x.terms) {
        Form t = lift_key(k, c);
        if (first) {
            out = t;
            first = false;
        } else {
            if (t.degree != out.degree) throw InternalError("mixed degrees in a lift");
            out += t;
        }
    }
    return out;
}

RelForm RelativeFamily::rel_d(const RelForm& x) const {
    RelForm out;
    for (const auto& [k, c] : x.terms) {
        Form df = ops_.d(lift_key(k, c));
        for (const auto& [fk, fc] : df.terms) project_key(fk, fc, out);
    }
    return out;
}

RelForm RelativeFamily::rel_iota(const RelForm& x) const {
    RelForm out;
    for (const auto& [k, c] : x.terms) {
        Form f = ops_.iota_delta(lift_key(k, c));
        for (const auto& [fk, fc] : f.terms) project_key(fk, fc, out);
    }
    return out;
}

std::string RelativeFamily::str(const RelForm& x) const {
    if (x.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    const std::string cn = A_.gens.names[static_cast<std::size_t>(c_)];
    for (const auto& [k, c] : x.terms) {
        std::string cs = rat_str(c);
        if (!first) os << (cs[0] == '-' ? " - " : " + ");
        else if (cs[0] == '-') os << "-";
        std::string mag = cs[0] == '-' ? cs.substr(1) : cs;
        if (mag != "1") os << mag << "*";
        if (k.e > 0) os << cn << (k.e > 1 ? "^" + std::to_string(k.e) : "") << "*";
        if (k.dc) os << "d" << cn << "*";
        os << "(" << A_.names[static_cast<std::size_t>(cfree_[static_cast<std::size_t>(uc(k.k[0]))])];
        for (int i = 1; i <= form_degree(k.k); ++i)
            os << " d" << A_.names[static_cast<std::size_t>(cfree_[static_cast<std::size_t>(uc(k.k[static_cast<std::size_t>(i)]))])];
        os << ")";
        first = false;
    }
    return os.str();
}

namespace {

// All normal-form keys of one weight with m differential slots.
std::vector<RelKey> rel_keys(const RelativeFamily& fam, int weight, int m, int dc) {
    std::vector<RelKey> out;
    if (m < 0) return out;
    const int cw = fam.c_weight();
    for (int e = 0; (e + dc) * cw <= weight; ++e) {
        const int rem = weight - (e + dc) * cw;
        for (int p0 = 0; p0 < fam.base_free_count(); ++p0) {
            const int w0 = fam.base_free_weight(p0);
            if (w0 > rem) continue;
            FormKey cur(1, static_cast<char>(p0));
            // depth-first over the remaining slots
            std::function<void(int)> go = [&](int left) {
                if (static_cast<int>(cur.size()) == m + 1) {
                    if (left == 0) out.push_back(RelKey{e, dc, cur});
                    return;
                }
                for (int p = 1; p < fam.base_free_count(); ++p) {
                    int w = fam.base_free_weight(p);
                    if (w > left) continue;
                    cur += static_cast<char>(p);
                    go(left - w);
                    cur.pop_back();
                }
            };
            go(rem - w0);
        }
    }
    return out;
}

struct PerIndex {
    std::vector<std::pair<int, RelKey>> basis;
    std::map<std::pair<int, RelKey>, int> pos;
};

PerIndex per_index(const RelativeFamily& fam, int weight, int degree) {
    PerIndex ix;
    ix.basis = per_basis(fam, weight, degree);
    for (std::size_t j = 0; j < ix.basis.size(); ++j) ix.pos[ix.basis[j]] = static_cast<int>(j);
    return ix;
}

RatVec per_vec(const PerIndex& ix, const PerElem& x) {
    RatVec v(ix.basis.size(), Rat(0));
    for (const auto& [i, f] : x.comp)
        for (const auto& [k, c] : f.terms) {
            auto it = ix.pos.find({i, k});
            if (it == ix.pos.end()) throw InternalError("element outside the weight slice");
            v[static_cast<std::size_t>(it->second)] = c;
        }
    return v;
}

PerElem per_elem(const PerIndex& ix, const RatVec& v) {
    PerElem x;
    for (std::size_t j = 0; j < v.size(); ++j)
        if (!is_zero(v[j])) x.comp[ix.basis[j].first].add(ix.basis[j].second, v[j]);
    return x;
}

PerElem basis_elem(const std::pair<int, RelKey>& b) {
    PerElem x;
    x.comp[b.first].add(b.second, 1);
    return x;
}

void prune(PerElem& x) {
    for (auto it = x.comp.begin(); it != x.comp.end();)
        if (it->second.zero()) it = x.comp.erase(it);
        else ++it;
}

Mat diff_matrix(const RelativeFamily& fam, const PerIndex& from, const PerIndex& to) {
    Mat D(static_cast<int>(to.basis.size()), static_cast<int>(from.basis.size()));
    for (std::size_t j = 0; j < from.basis.size(); ++j) {
        RatVec col = per_vec(to, per_diff(fam, basis_elem(from.basis[j])));
        for (std::size_t i = 0; i < col.size(); ++i) D.at(static_cast<int>(i), static_cast<int>(j)) = col[i];
    }
    return D;
}

} // namespace

bool PerElem::zero() const {
    for (const auto& [i, f] : comp)
        if (!f.zero()) return false;
    return true;
}

bool PerElem::operator==(const PerElem& o) const { return (*this - o).zero(); }

PerElem PerElem::operator+(const PerElem& o) const {
    PerElem r = *this;
    for (const auto& [i, f] : o.comp) {
        auto it = r.comp.find(i);
        if (it == r.comp.end()) r.comp[i] = f;
        else it->second = it->second + f;
    }
    prune(r);
    return r;
}

PerElem PerElem::operator-(const PerElem& o) const { return *this + o.scaled(Rat(-1)); }

PerElem PerElem::scaled(const Rat& c) const {
    PerElem r;
    if (is_zero(c)) return r;
    for (const auto& [i, f] : comp) r.comp[i] = f.scaled(c);
    return r;
}

PerElem per_diff(const RelativeFamily& fam, const PerElem& x) {
    PerElem y;
    for (const auto& [i, xi] : x.comp) {
        y.comp[i] = y.comp[i] + fam.rel_d(xi).dc_free();
        y.comp[i + 1] = y.comp[i + 1] + fam.rel_iota(xi).dc_free();
    }
    prune(y);
    return y;
}

std::vector<std::pair<int, RelKey>> per_basis(const RelativeFamily& fam, int weight, int degree) {
    std::vector<std::pair<int, RelKey>> out;
    const int start = degree >= 0 ? degree % 2 : (degree % 2 + 2) % 2;
    for (int m = start; m <= weight; m += 2) {
        const int i = (degree - m) / 2;
        for (const auto& k : rel_keys(fam, weight, m, 0)) out.emplace_back(i, k);
    }
    return out;
}

std::vector<PerElem> per_cycles(const RelativeFamily& fam, int weight, int degree) {
    PerIndex from = per_index(fam, weight, degree), to = per_index(fam, weight, degree + 1);
    std::vector<PerElem> out;
    for (const auto& v : kernel_basis(diff_matrix(fam, from, to))) out.push_back(per_elem(from, v));
    return out;
}

std::vector<PerElem> per_homology_reps(const RelativeFamily& fam, int weight, int degree) {
    PerIndex here = per_index(fam, weight, degree);
    PerIndex below = per_index(fam, weight, degree - 1);
    PerIndex above = per_index(fam, weight, degree + 1);
    std::vector<RatVec> cols;
    for (const auto& b : below.basis) cols.push_back(per_vec(here, per_diff(fam, basis_elem(b))));
    std::vector<PerElem> out;
    int r = rank(from_columns(cols, static_cast<int>(here.basis.size())));
    for (const auto& v : kernel_basis(diff_matrix(fam, here, above))) {
        cols.push_back(v);
        Mat M = from_columns(cols, static_cast<int>(here.basis.size()));
        if (rank(M) > r) {
            ++r;
            out.push_back(per_elem(here, v));
        } else {
            cols.pop_back();
        }
    }
    return out;
}

bool per_is_cycle(const RelativeFamily& fam, const PerElem& x) { return per_diff(fam, x).zero(); }

bool per_is_boundary(const RelativeFamily& fam, int weight, int degree, const PerElem& x) {
    if (x.zero()) return true;
    PerIndex here = per_index(fam, weight, degree);
    PerIndex below = per_index(fam, weight, degree - 1);
    RatVec xv = per_vec(here, x);
    std::vector<RatVec> cols;
    for (const auto& b : below.basis) cols.push_back(per_vec(here, per_diff(fam, basis_elem(b))));
    return solve(from_columns(cols, static_cast<int>(here.basis.size())), xv).has_value();
}

ConnectionValue gm_connect(const RelativeFamily& fam, const PerElem& cycle,
                           const std::map<int, RelForm>* perturb) {
    std::map<int, RelForm> tot = cycle.comp;
    if (perturb)
        for (const auto& [i, p] : *perturb) tot[i] = tot[i] + p;
    std::map<int, RelForm> full;
    for (const auto& [i, xi] : tot) {
        full[i] = full[i] + fam.rel_d(xi);
        full[i + 1] = full[i + 1] + fam.rel_iota(xi);
    }
    ConnectionValue out;
    out.residue_ok = true;
    for (const auto& [i, f] : full) {
        if (!f.dc_free().zero()) out.residue_ok = false;
        RelForm v = f.dc_part();
        if (!v.zero()) out.value.comp[i] = v;
    }
    return out;
}

PerElem per_scale_base(const PerElem& x, int e) {
    PerElem r;
    for (const auto& [i, f] : x.comp) {
        RelForm g;
        for (const auto& [k, c] : f.terms) g.add(RelKey{k.e + e, k.dc, k.k}, c);
        r.comp[i] = g;
    }
    return r;
}

RelCertificate certify_relative(const RelativeFamily& fam, int max_degree, int weight) {
    RelCertificate cert;
    cert.free_ok = fam.free_over_base();
    const FinDimAlgebra& A = fam.algebra();
    const FormOps& ops = fam.forms();
    const int cidx = A.index_of_word(Word(1, static_cast<char>(fam.c_letter())));
    Form cform = Form::basis(FormKey(1, static_cast<char>(cidx)));
    FormKey dck(1, '\0');
    dck += static_cast<char>(cidx);
    Form dcform = Form::basis(dck);

    cert.section_ok = cert.ideal_killed = cert.kernel_stable = cert.square_zero = true;
    for (int n = 0; n <= max_degree; ++n) {
        FormSpace sp = form_space(A, n, weight);
        std::map<RelKey, int> relpos;
        std::vector<RelForm> images;
        for (const auto& key : sp.keys) {
            Form u = Form::basis(key);
            RelForm p = fam.project(u);
            images.push_back(p);
            for (const auto& [k, c] : p.terms)
                if (!relpos.count(k)) {
                    int next = static_cast<int>(relpos.size());
                    relpos[k] = next;
                }
            // the canonical section splits the projection
            if (cert.section_ok && !(fam.project(fam.lift(p)) == p)) {
                cert.section_ok = false;
                cert.witness = "section failed on " + ops.form_str(u);
            }
            // graded commutators with the base variable and its differential
            // die; only checkable while the product stays below the cap
            int kw = 0;
            for (char ch : key) kw += A.weight(static_cast<unsigned char>(ch));
            if (kw + fam.c_weight() <= fam.cap()) {
                Form com0 = ops.mul(u, cform) - ops.mul(cform, u);
                Form com1 = ops.mul(u, dcform) - ops.mul(dcform, u) * Rat(n % 2 ? -1 : 1);
                if (cert.ideal_killed && !(fam.project(com0).zero() && fam.project(com1).zero())) {
                    cert.ideal_killed = false;
                    cert.witness = "relations ideal survives against " + ops.form_str(u);
                }
            }
        }
        // the kernel of the projection is closed under d and the contraction
        Mat P(static_cast<int>(relpos.size()), sp.dim());
        for (int j = 0; j < sp.dim(); ++j)
            for (const auto& [k, c] : images[static_cast<std::size_t>(j)].terms)
                P.at(relpos[k], j) = c;
        for (const auto& v : kernel_basis(P)) {
            Form f = sp.form(v);
            if (!(fam.project(ops.d(f)).zero() && fam.project(ops.iota_delta(f)).zero())) {
                cert.kernel_stable = false;
                cert.witness = "projection kernel not stable at degree " + std::to_string(n);
            }
        }
        // the induced differentials square to zero on the quotient
        for (const auto& b : per_basis(fam, weight, n)) {
            PerElem x;
            x.comp[b.first].add(b.second, 1);
            if (!per_diff(fam, per_diff(fam, x)).zero() || !fam.rel_d(fam.rel_d(x.comp[b.first])).zero()) {
                cert.square_zero = false;
                cert.witness = "differential square at degree " + std::to_string(n);
            }
        }
    }
    return cert;
}

GmReport gm_flatness(const RelativeFamily& fam,
                     const std::vector<std::pair<int, int>>& slices, unsigned seed) {
    std::mt19937 rng(seed);
    GmReport rep;
    for (const auto& [w, n] : slices) {
        std::vector<PerElem> reps = per_homology_reps(fam, w, n);
        rep.classes += static_cast<int>(reps.size());
        for (std::size_t ci = 0; ci < reps.size(); ++ci) {
            const PerElem& x = reps[ci];
            std::string where = "weight " + std::to_string(w) + " degree " + std::to_string(n) +
                                " class " + std::to_string(ci);
            ConnectionValue base = gm_connect(fam, x);
            if (!base.residue_ok) {
                rep.lift_independent = false;
                rep.witness = where + ": differential left the filtration";
                continue;
            }
            // alternate lift: add random elements of the filtration
            std::map<int, RelForm> p;
            for (const auto& [i, xi] : x.comp) {
                (void)xi;
                RelForm pf;
                for (const auto& k : rel_keys(fam, w, n - 2 * i - 1, 1)) {
                    int c = static_cast<int>(rng() % 5) - 2;
                    if (c) pf.add(k, Rat(c));
                }
                if (!pf.zero()) p[i] = pf;
            }
            ConnectionValue pert = gm_connect(fam, x, &p);
            if (!pert.residue_ok ||
                !per_is_boundary(fam, w - fam.c_weight(), n, pert.value - base.value)) {
                rep.lift_independent = false;
                rep.witness = where + ": lifts disagree";
            }
            // product rules against multiplication by powers of the base
            // variable, when the scaled class still fits under the cap
            if (w + fam.c_weight() <= fam.cap()) {
                ConnectionValue up = gm_connect(fam, per_scale_base(x, 1));
                PerElem residue = up.value - x - per_scale_base(base.value, 1);
                if (!up.residue_ok || !(residue.zero() || per_is_boundary(fam, w, n, residue))) {
                    rep.leibniz_ok = false;
                    rep.witness = where + ": product rule failed";
                }
            }
            if (w + 2 * fam.c_weight() <= fam.cap()) {
                ConnectionValue up2 = gm_connect(fam, per_scale_base(x, 2));
                PerElem residue2 = up2.value - per_scale_base(x, 1).scaled(Rat(2)) -
                                   per_scale_base(base.value, 2);
                if (!up2.residue_ok ||
                    !(residue2.zero() || per_is_boundary(fam, w + fam.c_weight(), n, residue2))) {
                    rep.leibniz_ok = false;
                    rep.witness = where + ": product rule failed at the second power";
                }
            }
        }
    }
    return rep;
}

} // namespace ncdr
