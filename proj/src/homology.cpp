#include "ncdr/homology.hpp"

#include "ncdr/identity_suite.hpp"

#include <algorithm>
#include <set>

namespace ncdr {

namespace {

Mat from_column_list(const std::vector<RatVec>& cols, int rows) {
    Mat m(rows, static_cast<int>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < rows; ++i) m.at(i, static_cast<int>(j)) = cols[j][static_cast<std::size_t>(i)];
    return m;
}

std::vector<RatVec> matrix_columns(const Mat& m) {
    std::vector<RatVec> cols(static_cast<std::size_t>(m.cols), RatVec(static_cast<std::size_t>(m.rows)));
    for (int j = 0; j < m.cols; ++j)
        for (int i = 0; i < m.rows; ++i) cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = m.at(i, j);
    return cols;
}

int key_weight(const FinDimAlgebra& A, const FormKey& k) {
    int w = 0;
    for (unsigned char c : k) w += A.weight(c);
    return w;
}

} // namespace

void ChainComplex::validate() const {
    if (diff.size() != dims.size()) throw InternalError("complex has mismatched differential count");
    for (std::size_t j = 0; j < diff.size(); ++j) {
        int target = j == 0 ? 0 : dims[j - 1];
        if (diff[j].cols != dims[j] || diff[j].rows != target)
            throw InternalError("complex differential has a wrong shape");
        if (j >= 1 && !(diff[j - 1] * diff[j]).all_zero())
            throw InternalError("complex differentials do not compose to zero");
    }
}

std::vector<DegreeHomology> homology(const ChainComplex& C) {
    std::vector<DegreeHomology> out;
    for (std::size_t j = 0; j < C.dims.size(); ++j) {
        DegreeHomology h;
        h.degree = C.lo + static_cast<int>(j);
        std::vector<RatVec> ker = kernel_basis(C.diff[j]);
        std::vector<RatVec> img;
        if (j + 1 < C.dims.size()) {
            const Mat& in = C.diff[j + 1];
            std::vector<int> piv = column_space_pivots(in);
            for (int c : piv) {
                RatVec v(static_cast<std::size_t>(in.rows));
                for (int i = 0; i < in.rows; ++i) v[static_cast<std::size_t>(i)] = in.at(i, c);
                img.push_back(std::move(v));
            }
        }
        // Kernel vectors that stay independent after the image columns.
        std::vector<RatVec> all = img;
        all.insert(all.end(), ker.begin(), ker.end());
        Mat m = from_column_list(all, C.dims[j]);
        std::vector<int> piv = column_space_pivots(m);
        for (int c : piv)
            if (c >= static_cast<int>(img.size()))
                h.reps.push_back(ker[static_cast<std::size_t>(c) - img.size()]);
        h.dim = static_cast<int>(h.reps.size());
        out.push_back(std::move(h));
    }
    return out;
}

ChainComplex restrict_complex(const ChainComplex& C, const std::vector<Mat>& projectors,
                              std::vector<Mat>* sections_out) {
    if (projectors.size() != C.dims.size())
        throw InternalError("projector count does not match the complex");
    std::vector<Mat> sections;
    std::vector<int> rdims;
    for (std::size_t j = 0; j < C.dims.size(); ++j) {
        const Mat& P = projectors[j];
        if (P.rows != C.dims[j] || P.cols != C.dims[j])
            throw InternalError("projector has a wrong shape");
        std::vector<int> piv = column_space_pivots(P);
        Mat S(C.dims[j], static_cast<int>(piv.size()));
        for (std::size_t c = 0; c < piv.size(); ++c)
            for (int i = 0; i < C.dims[j]; ++i) S.at(i, static_cast<int>(c)) = P.at(i, piv[c]);
        sections.push_back(std::move(S));
        rdims.push_back(static_cast<int>(piv.size()));
    }
    ChainComplex R;
    R.lo = C.lo;
    R.dims = rdims;
    for (std::size_t j = 0; j < C.dims.size(); ++j) {
        if (j == 0) {
            R.diff.push_back(Mat(0, rdims[0]));
            continue;
        }
        Mat mapped = C.diff[j] * sections[j];
        auto sol = solve_many(sections[j - 1], mapped);
        if (!sol) throw InternalError("differential does not preserve the projected subspaces");
        R.diff.push_back(*sol);
    }
    if (sections_out) *sections_out = std::move(sections);
    return R;
}

Mat bar_boundary(const FinDimAlgebra& A, int n, int weight) {
    FormSpace from = form_space(A, n, weight);
    FormSpace to = form_space(A, n - 1, weight);
    Mat m(to.dim(), from.dim());
    for (int col = 0; col < from.dim(); ++col) {
        const FormKey& k = from.keys[static_cast<std::size_t>(col)];
        Form acc(n - 1);
        auto put = [&](const FormKey& nk, const Rat& c) {
            // Normalization: interior slots on the unit are degenerate.
            for (std::size_t s = 1; s < nk.size(); ++s)
                if (nk[s] == '\0') return;
            acc += Form::basis(nk, c);
        };
        for (int i = 0; i < n; ++i) {
            SparseVec prod = A.mul(static_cast<unsigned char>(k[static_cast<std::size_t>(i)]),
                                   static_cast<unsigned char>(k[static_cast<std::size_t>(i) + 1]));
            Rat sign((i % 2) ? -1 : 1);
            for (const auto& [idx, c] : prod) {
                FormKey nk = k;
                nk[static_cast<std::size_t>(i)] = static_cast<char>(idx);
                nk.erase(nk.begin() + i + 1);
                put(nk, sign * c);
            }
        }
        SparseVec wrap = A.mul(static_cast<unsigned char>(k.back()), static_cast<unsigned char>(k[0]));
        Rat sign((n % 2) ? -1 : 1);
        for (const auto& [idx, c] : wrap) {
            FormKey nk(1, static_cast<char>(idx));
            nk += k.substr(1, k.size() - 2);
            put(nk, sign * c);
        }
        if (acc.zero()) continue;
        RatVec v = to.vec(acc);
        for (int i = 0; i < to.dim(); ++i) m.at(i, col) = v[static_cast<std::size_t>(i)];
    }
    return m;
}

HochschildReport hochschild(const FinDimAlgebra& A, int n_max, int weight) {
    FormOps ops(A);
    ChainComplex C;
    C.lo = 0;
    std::vector<FormSpace> spaces;
    for (int n = 0; n <= n_max + 1; ++n) spaces.push_back(form_space(A, n, weight));
    for (int n = 0; n <= n_max + 1; ++n) {
        C.dims.push_back(spaces[static_cast<std::size_t>(n)].dim());
        if (n == 0)
            C.diff.push_back(Mat(0, C.dims[0]));
        else
            C.diff.push_back(operator_matrix(spaces[static_cast<std::size_t>(n)],
                                             spaces[static_cast<std::size_t>(n) - 1],
                                             [&](const Form& w) { return ops.b(w); }));
    }
    C.validate();
    std::vector<DegreeHomology> all = homology(C);

    ChainComplex O;
    O.lo = 0;
    O.dims = C.dims;
    O.diff.push_back(Mat(0, C.dims[0]));
    for (int n = 1; n <= n_max + 1; ++n) O.diff.push_back(bar_boundary(A, n, weight));
    O.validate();
    std::vector<DegreeHomology> oracle = homology(O);

    HochschildReport r;
    r.oracle_agrees = true;
    for (int n = 0; n <= n_max; ++n) {
        r.degrees.push_back(all[static_cast<std::size_t>(n)]);
        if (all[static_cast<std::size_t>(n)].dim != oracle[static_cast<std::size_t>(n)].dim)
            r.oracle_agrees = false;
    }
    r.truncation_risk = A.truncated && (weight < 0 || weight > A.cap);
    return r;
}

KernelIotaReport hh_kernel_iota(const FinDimAlgebra& A, int n, int weight) {
    KernelIotaReport r;
    r.degree = n;
    QuotientSpace q = dr_space(A, n, weight);
    Mat M(0, q.dim());
    r.descends = true;
    if (n >= 1) {
        FormOps ops(A);
        FormSpace target = form_space(A, n - 1, weight);
        Mat I = operator_matrix(q.ambient, target, [&](const Form& w) { return ops.iota_delta(w); });
        r.descends = (I * (q.section * q.projection)) == I;
        M = I * q.section;
    }
    for (const RatVec& v : kernel_basis(M)) r.reps.push_back(v);
    r.dim = static_cast<int>(r.reps.size());
    r.hochschild_dim = hochschild(A, n, weight).degrees[static_cast<std::size_t>(n)].dim;
    r.matches = r.dim == r.hochschild_dim;
    return r;
}

SesReport verify_ses(const FinDimAlgebra& A, int n, int weight) {
    SesReport r;
    r.degree = n;
    FormOps ops(A);
    QuotientSpace q = dr_space(A, n, weight);
    r.dr_dim = q.dim();
    FormSpace target = form_space(A, n - 1, weight);
    Mat I = operator_matrix(q.ambient, target, [&](const Form& w) { return ops.iota_delta(w); });
    if (!((I * (q.section * q.projection)) == I))
        throw InternalError("contraction does not factor through the trace quotient");
    Mat M = I * q.section;

    // kappa-invariant commutators [algebra, forms] one degree down. The
    // commutator keeps total weight, so when sliced the form factor must
    // carry the complementary weight.
    FormSpace a0 = form_space(A, 0, -1);
    std::vector<RatVec> comm;
    for (const FormKey& ak : a0.keys) {
        int aw = key_weight(A, ak);
        if (weight >= 0 && weight - aw < 0) continue;
        FormSpace tslice = weight >= 0 ? form_space(A, n - 1, weight - aw) : target;
        SparseVec a = sv_unit(static_cast<unsigned char>(ak[0]));
        for (const FormKey& wk : tslice.keys) {
            Form w = Form::basis(wk);
            Form g = ops.left_mul(a, w) - ops.right_mul(w, a);
            if (!g.zero()) comm.push_back(target.vec(g));
        }
    }
    Mat C = from_column_list(comm, target.dim());
    std::vector<int> piv = column_space_pivots(C);
    std::vector<RatVec> cbasis;
    for (int c : piv) {
        RatVec v(static_cast<std::size_t>(target.dim()));
        for (int i = 0; i < target.dim(); ++i) v[static_cast<std::size_t>(i)] = C.at(i, c);
        cbasis.push_back(std::move(v));
    }
    Mat K = operator_matrix(target, target, [&](const Form& w) { return ops.kappa(w); });
    Mat Cb = from_column_list(cbasis, target.dim());
    Mat KmI = K - Mat::identity(target.dim());
    std::vector<RatVec> inv_coords = kernel_basis(KmI * Cb);
    std::vector<RatVec> tbasis;
    for (const RatVec& x : inv_coords) {
        RatVec v = Cb.apply(x);
        tbasis.push_back(std::move(v));
    }
    r.target_dim = static_cast<int>(tbasis.size());

    r.h_dim = hochschild(A, n, weight).degrees[static_cast<std::size_t>(n)].dim;
    r.kernel_matches = static_cast<int>(kernel_basis(M).size()) == r.h_dim;
    // Image of the contraction equals the invariant commutator space.
    std::vector<RatVec> icols = matrix_columns(M);
    std::vector<RatVec> both = tbasis;
    both.insert(both.end(), icols.begin(), icols.end());
    int rt = static_cast<int>(column_space_pivots(from_column_list(tbasis, target.dim())).size());
    int ri = static_cast<int>(column_space_pivots(M).size());
    int ru = static_cast<int>(column_space_pivots(from_column_list(both, target.dim())).size());
    r.image_matches = (rt == ri && ru == rt);
    r.dims_balance = r.dr_dim == r.h_dim + r.target_dim;
    return r;
}

namespace {

// Truncation by a fixed minimal t-power i0: degree n keeps form degrees
// k <= n - 2 i0. Unlike a flat cap on k, this cuts a genuine quotient
// complex (the dropped low powers of t are stable under both parts of the
// differential), so the square of the differential vanishes on the nose.
// i0 is chosen so that the lowest window degree still reaches form degree D.
int window_i0(int n_lo, int D) { return -((D - n_lo) / 2); }

std::vector<int> window_ks(WindowMode mode, int n, int i0) {
    std::vector<int> ks;
    int lo = 0;
    if ((n % 2 + 2) % 2 == 1) lo = 1;
    if (mode == WindowMode::negative && n > lo) lo = n;
    int hi = n - 2 * i0;
    if (mode == WindowMode::cyclic) hi = std::min(hi, n);
    for (int k = lo; k <= hi; k += 2) ks.push_back(k);
    return ks;
}

} // namespace

WindowComplex build_window(const FinDimAlgebra& A, WindowVariant variant, WindowMode mode,
                           int n_lo, int n_hi, int D, int weight) {
    WindowComplex W;
    W.A = &A;
    W.variant = variant;
    W.mode = mode;
    W.n_lo = n_lo;
    W.n_hi = n_hi;
    W.D = D;
    W.weight = weight;
    FormOps ops(A);
    int i0 = window_i0(n_lo, D);
    for (int n = n_lo; n <= n_hi; ++n) {
        W.ks.push_back(window_ks(mode, n, i0));
        std::vector<FormSpace> comps;
        for (int k : W.ks.back()) comps.push_back(form_space(A, k, weight, /*reduced=*/k == 0));
        W.comps.push_back(std::move(comps));
    }
    W.C.lo = n_lo;
    for (std::size_t j = 0; j < W.comps.size(); ++j) {
        int dim = 0;
        std::vector<int> offs;
        for (const FormSpace& s : W.comps[j]) {
            offs.push_back(dim);
            dim += s.dim();
        }
        W.C.dims.push_back(dim);
    }
    for (std::size_t j = 0; j < W.comps.size(); ++j) {
        if (j == 0) {
            W.C.diff.push_back(Mat(0, W.C.dims[0]));
            continue;
        }
        const std::vector<int>& src_ks = W.ks[j];
        const std::vector<int>& dst_ks = W.ks[j - 1];
        std::vector<int> src_off(src_ks.size()), dst_off(dst_ks.size());
        for (std::size_t c = 0, o = 0; c < src_ks.size(); ++c) {
            src_off[c] = static_cast<int>(o);
            o += static_cast<std::size_t>(W.comps[j][c].dim());
        }
        for (std::size_t c = 0, o = 0; c < dst_ks.size(); ++c) {
            dst_off[c] = static_cast<int>(o);
            o += static_cast<std::size_t>(W.comps[j - 1][c].dim());
        }
        Mat m(W.C.dims[j - 1], W.C.dims[j]);
        auto dst_index = [&](int k) {
            for (std::size_t c = 0; c < dst_ks.size(); ++c)
                if (dst_ks[c] == k) return static_cast<int>(c);
            return -1;
        };
        for (std::size_t c = 0; c < src_ks.size(); ++c) {
            int k = src_ks[c];
            const FormSpace& src = W.comps[j][c];
            for (int col = 0; col < src.dim(); ++col) {
                Form w = Form::basis(src.keys[static_cast<std::size_t>(col)]);
                // Degree-raising part (t power unchanged).
                int up = dst_index(k + 1);
                if (up >= 0) {
                    Form img = variant == WindowVariant::b_conn ? ops.connes_B(w) : ops.d(w);
                    RatVec v = W.comps[j - 1][static_cast<std::size_t>(up)].vec(img);
                    for (std::size_t i = 0; i < v.size(); ++i)
                        m.at(dst_off[static_cast<std::size_t>(up)] + static_cast<int>(i),
                             src_off[c] + col) = v[i];
                }
                // Degree-lowering part (one more t power).
                if (k >= 1) {
                    int down = dst_index(k - 1);
                    if (down >= 0) {
                        Form img = variant == WindowVariant::b_conn ? ops.b(w) : ops.iota_delta(w);
                        if (k - 1 == 0) img.terms.erase(FormKey(1, '\0'));
                        RatVec v = W.comps[j - 1][static_cast<std::size_t>(down)].vec(img);
                        for (std::size_t i = 0; i < v.size(); ++i)
                            m.at(dst_off[static_cast<std::size_t>(down)] + static_cast<int>(i),
                                 src_off[c] + col) = v[i];
                    }
                }
            }
        }
        W.C.diff.push_back(std::move(m));
    }
    W.C.validate();
    return W;
}

namespace {

std::vector<int> window_dims(const WindowComplex& W, const std::vector<int>& degrees) {
    std::vector<DegreeHomology> h = homology(W.C);
    std::vector<int> out;
    for (int n : degrees) out.push_back(h[static_cast<std::size_t>(n - W.n_lo)].dim);
    return out;
}

// Block-diagonal harmonic projectors per window degree (P or its complement).
std::vector<Mat> window_projectors(const WindowComplex& W, bool perp) {
    std::vector<Mat> out;
    for (std::size_t j = 0; j < W.comps.size(); ++j) {
        Mat P(W.C.dims[j], W.C.dims[j]);
        int off = 0;
        for (std::size_t c = 0; c < W.comps[j].size(); ++c) {
            int k = W.ks[j][c];
            HarmonicDecomposition h = harmonic_projector(*W.A, k, W.weight);
            const Mat& blk = perp ? h.Pperp : h.P;
            for (int i = 0; i < blk.rows; ++i)
                for (int l = 0; l < blk.cols; ++l) P.at(off + i, off + l) = blk.at(i, l);
            off += W.comps[j][c].dim();
        }
        out.push_back(std::move(P));
    }
    return out;
}

// Coordinate projection from a deeper truncation onto a shallower one
// (identity on shared components, zero on the extra top components).
// This is the transition map of the truncation tower and a chain map.
std::vector<Mat> window_truncation(const WindowComplex& big, const WindowComplex& small) {
    if (big.n_lo != small.n_lo || big.n_hi != small.n_hi)
        throw InternalError("tower windows cover different degree ranges");
    std::vector<Mat> out;
    for (std::size_t j = 0; j < small.comps.size(); ++j) {
        Mat pi(small.C.dims[j], big.C.dims[j]);
        int boff = 0;
        for (std::size_t c = 0; c < big.ks[j].size(); ++c) {
            int k = big.ks[j][c];
            int soff = 0;
            for (std::size_t sc = 0; sc < small.ks[j].size(); ++sc) {
                if (small.ks[j][sc] == k) {
                    int d = small.comps[j][sc].dim();
                    if (d != big.comps[j][c].dim())
                        throw InternalError("tower windows disagree on a shared component");
                    for (int i = 0; i < d; ++i) pi.at(soff + i, boff + i) = 1;
                    break;
                }
                soff += small.comps[j][sc].dim();
            }
            boff += big.comps[j][c].dim();
        }
        out.push_back(std::move(pi));
    }
    for (std::size_t j = 1; j < out.size(); ++j)
        if (!(small.C.diff[j] * out[j] == out[j - 1] * big.C.diff[j]))
            throw InternalError("truncation transition is not a chain map");
    return out;
}

// Rank of the map induced on homology by a chain map pi: big -> small,
// at the requested degrees. For the truncation tower this is the honest
// finite approximation of the limit theory: junk classes created by the
// cutoff fail to lift one level up and are discarded.
std::vector<int> tower_dims(const ChainComplex& big, const ChainComplex& small,
                            const std::vector<Mat>& pi, const std::vector<int>& degrees) {
    std::vector<DegreeHomology> h = homology(big);
    std::vector<int> out;
    for (int n : degrees) {
        std::size_t j = static_cast<std::size_t>(n - big.lo);
        std::vector<RatVec> cols;
        if (j + 1 < small.dims.size()) {
            const Mat& in = small.diff[j + 1];
            for (int c : column_space_pivots(in)) {
                RatVec v(static_cast<std::size_t>(in.rows));
                for (int i = 0; i < in.rows; ++i) v[static_cast<std::size_t>(i)] = in.at(i, c);
                cols.push_back(std::move(v));
            }
        }
        std::size_t nimg = cols.size();
        for (const RatVec& rep : h[j].reps) cols.push_back(pi[j].apply(rep));
        Mat m = from_column_list(cols, small.dims[j]);
        int extra = 0;
        for (int c : column_space_pivots(m))
            if (c >= static_cast<int>(nimg)) ++extra;
        out.push_back(extra);
    }
    return out;
}

} // namespace

PeriodicReport periodic_homology(const FinDimAlgebra& A, int n_lo, int n_hi, int D, int weight) {
    PeriodicReport r;
    r.n_lo = n_lo;
    r.n_hi = n_hi;
    r.D = D;
    r.weight = weight;
    for (int n = n_lo + 1; n < n_hi; ++n) r.degrees.push_back(n);
    // Periodic dimensions are ranks of the truncation-tower transition map
    // between cutoff levels D and D+2; stability compares with the ranks one
    // level shallower (D-2 against D).
    auto tower = [&](WindowVariant v, int cap) {
        WindowComplex small = build_window(A, v, WindowMode::periodic, n_lo, n_hi, cap, weight);
        WindowComplex big = build_window(A, v, WindowMode::periodic, n_lo, n_hi, cap + 2, weight);
        std::vector<Mat> pi = window_truncation(big, small);
        return tower_dims(big.C, small.C, pi, r.degrees);
    };
    r.dims_contraction = tower(WindowVariant::contraction, D);
    r.dims_b_conn = tower(WindowVariant::b_conn, D);
    r.variants_agree = r.dims_contraction == r.dims_b_conn;
    r.stable = r.dims_contraction == tower(WindowVariant::contraction, D - 2) &&
               r.dims_b_conn == tower(WindowVariant::b_conn, D - 2);

    // Factorial rescaling intertwines the two differentials on the harmonic
    // part: the degree operator turns d into B and the contraction into b.
    FormOps ops(A);
    r.intertwiner_ok = true;
    for (int n = 1; n <= std::min(4, D); ++n) {
        HarmonicDecomposition h = harmonic_projector(A, n, weight);
        if (h.space.dim() == 0) continue;
        FormSpace up = form_space(A, n + 1, weight);
        FormSpace down = form_space(A, n - 1, weight, /*reduced=*/n - 1 == 0);
        Mat Bm = operator_matrix(h.space, up, [&](const Form& w) { return ops.connes_B(w); });
        Mat dm = operator_matrix(h.space, up, [&](const Form& w) { return ops.d(w); });
        Mat bm = operator_matrix(h.space, down, [&](const Form& w) {
            Form img = ops.b(w);
            if (n - 1 == 0) img.terms.erase(FormKey(1, '\0'));
            return img;
        });
        Mat im = operator_matrix(h.space, down, [&](const Form& w) {
            Form img = ops.iota_delta(w);
            if (n - 1 == 0) img.terms.erase(FormKey(1, '\0'));
            return img;
        });
        Mat scaled_d = dm * h.P;
        for (auto& row : scaled_d.a)
            for (auto& x : row) x *= Rat(n + 1);
        Mat scaled_b = bm * h.P;
        for (auto& row : scaled_b.a)
            for (auto& x : row) x *= Rat(n);
        if (!((Bm * h.P) == scaled_d) || !((im * h.P) == scaled_b)) r.intertwiner_ok = false;
    }
    return r;
}

CyclicReport cyclic_and_negative(const FinDimAlgebra& A, int n_lo, int n_hi, int D, int weight) {
    CyclicReport r;
    r.n_lo = n_lo;
    r.n_hi = n_hi;
    r.D = D;
    r.weight = weight;
    for (int n = n_lo + 1; n < n_hi; ++n) r.degrees.push_back(n);

    // Cyclic windows are intrinsically finite quotient complexes; their
    // dimensions are exact. Negative windows are capped above, so their
    // dimensions are tower transition ranks, as in the periodic case.
    WindowComplex hc = build_window(A, WindowVariant::b_conn, WindowMode::cyclic, n_lo, n_hi, D, weight);
    WindowComplex hhc = build_window(A, WindowVariant::contraction, WindowMode::cyclic, n_lo, n_hi, D, weight);
    r.hc = window_dims(hc, r.degrees);
    r.heart_hc = window_dims(hhc, r.degrees);

    auto dims_of = [&](const ChainComplex& C) {
        std::vector<DegreeHomology> h = homology(C);
        std::vector<int> out;
        for (int n : r.degrees) out.push_back(h[static_cast<std::size_t>(n - n_lo)].dim);
        return out;
    };

    // Tower rank for negative windows, optionally restricted to the image of
    // the per-component projectors (which commute with the transition map).
    auto neg_tower = [&](WindowVariant v, int cap, bool project) {
        WindowComplex small = build_window(A, v, WindowMode::negative, n_lo, n_hi, cap, weight);
        WindowComplex big = build_window(A, v, WindowMode::negative, n_lo, n_hi, cap + 2, weight);
        std::vector<Mat> pi = window_truncation(big, small);
        if (!project) return tower_dims(big.C, small.C, pi, r.degrees);
        std::vector<Mat> s_small, s_big;
        ChainComplex rs = restrict_complex(small.C, window_projectors(small, false), &s_small);
        ChainComplex rb = restrict_complex(big.C, window_projectors(big, false), &s_big);
        std::vector<Mat> rpi;
        for (std::size_t j = 0; j < pi.size(); ++j) {
            auto sol = solve_many(s_small[j], pi[j] * s_big[j]);
            if (!sol) throw InternalError("transition map does not preserve the projected subspaces");
            rpi.push_back(*sol);
        }
        return tower_dims(rb, rs, rpi, r.degrees);
    };
    r.hc_minus = neg_tower(WindowVariant::b_conn, D, false);
    r.hc_minus_stable = r.hc_minus == neg_tower(WindowVariant::b_conn, D - 2, false);
    r.heart_hc_minus = neg_tower(WindowVariant::contraction, D, false);

    r.p_heart_hc = dims_of(restrict_complex(hhc.C, window_projectors(hhc, false)));
    r.p_heart_hc_minus = neg_tower(WindowVariant::contraction, D, true);
    r.p_comparison = (r.p_heart_hc == r.hc) && (r.p_heart_hc_minus == r.hc_minus);

    std::vector<int> z = dims_of(restrict_complex(hc.C, window_projectors(hc, true)));
    r.p_perp_hc_vanishes = std::all_of(z.begin(), z.end(), [](int d) { return d == 0; });
    return r;
}

HodgeClass hodge_degree(const WindowComplex& W, int n, const RatVec& cycle) {
    HodgeClass out;
    out.degree = n;
    std::size_t j = static_cast<std::size_t>(n - W.n_lo);
    RatVec check = W.C.diff[j].apply(cycle);
    for (const Rat& x : check)
        if (x != 0) throw InternalError("input is not a cycle");
    int dim = W.C.dims[j];
    Mat img(dim, 0);
    if (j + 1 < W.C.dims.size()) img = W.C.diff[j + 1];
    Mat cvec(dim, 1);
    for (int i = 0; i < dim; ++i) cvec.at(i, 0) = cycle[static_cast<std::size_t>(i)];

    int kmax = W.ks[j].empty() ? 0 : W.ks[j].back();
    int level_max = ((n % 2 + 2) % 2 == 0) ? kmax / 2 : (kmax - 1) / 2;
    auto solvable = [&](int level) {
        int cut = ((n % 2 + 2) % 2 == 0) ? 2 * level : 2 * level + 1;
        std::vector<RatVec> cols = matrix_columns(img);
        int off = 0;
        for (std::size_t c = 0; c < W.comps[j].size(); ++c) {
            int d = W.comps[j][c].dim();
            if (W.ks[j][c] >= cut)
                for (int l = 0; l < d; ++l) {
                    RatVec e(static_cast<std::size_t>(dim));
                    e[static_cast<std::size_t>(off + l)] = 1;
                    cols.push_back(std::move(e));
                }
            off += d;
        }
        Mat M = from_column_list(cols, dim);
        return solve_many(M, cvec).has_value();
    };
    // A class homologous to zero sits above every cutoff by convention.
    {
        Mat M = from_column_list(matrix_columns(img), dim);
        out.is_zero = solve_many(M, cvec).has_value();
    }
    if (out.is_zero) {
        out.level = level_max;
        out.certified = true;
        out.rep = RatVec(static_cast<std::size_t>(dim), Rat(0));
        return out;
    }
    int lvl = 0;
    while (lvl + 1 <= level_max && solvable(lvl + 1)) ++lvl;
    out.level = lvl;
    out.certified = lvl < level_max;
    // Extract a representative supported above the cutoff.
    int cut = ((n % 2 + 2) % 2 == 0) ? 2 * lvl : 2 * lvl + 1;
    std::vector<RatVec> cols = matrix_columns(img);
    std::vector<int> high_pos;
    int off = 0;
    for (std::size_t c = 0; c < W.comps[j].size(); ++c) {
        int d = W.comps[j][c].dim();
        if (W.ks[j][c] >= cut)
            for (int l = 0; l < d; ++l) {
                RatVec e(static_cast<std::size_t>(dim));
                e[static_cast<std::size_t>(off + l)] = 1;
                high_pos.push_back(off + l);
                cols.push_back(std::move(e));
            }
        off += d;
    }
    Mat M = from_column_list(cols, dim);
    auto sol = solve_many(M, cvec);
    if (!sol) throw InternalError("representative solve failed after success check");
    out.rep = RatVec(static_cast<std::size_t>(dim), Rat(0));
    for (std::size_t i = 0; i < high_pos.size(); ++i)
        out.rep[static_cast<std::size_t>(high_pos[i])] =
            sol->at(img.cols + static_cast<int>(i), 0);
    return out;
}

namespace {

// Descended exterior differential between consecutive trace quotients,
// asserting that it is well defined on classes.
Mat descended_d(const FinDimAlgebra& A, const QuotientSpace& from, const QuotientSpace& to) {
    FormOps ops(A);
    Mat D = operator_matrix(from.ambient, to.ambient, [&](const Form& w) { return ops.d(w); });
    Mat PD = to.projection * D;
    if (!((PD * (from.section * from.projection)) == PD))
        throw InternalError("differential does not factor through the trace quotient");
    return PD * from.section;
}

} // namespace

ConnectedHamReport verify_connected_ham(const FinDimAlgebra& A, int weight) {
    ConnectedHamReport r;
    r.weight = weight;
    // Connectedness: the kernel of d on trace 0-classes is the scalars.
    r.connected = true;
    if (A.graded) {
        for (int w = 0; w <= A.cap; ++w) {
            QuotientSpace q0 = dr_space(A, 0, w);
            QuotientSpace q1 = dr_space(A, 1, w);
            Mat d0 = descended_d(A, q0, q1);
            int expect = w == 0 ? 1 : 0;
            if (static_cast<int>(kernel_basis(d0).size()) != expect) r.connected = false;
        }
    } else {
        QuotientSpace q0 = dr_space(A, 0, -1);
        QuotientSpace q1 = dr_space(A, 1, -1);
        Mat d0 = descended_d(A, q0, q1);
        if (static_cast<int>(kernel_basis(d0).size()) != 1) r.connected = false;
    }
    HochschildReport hh = hochschild(A, 2, weight);
    r.h2_vanishes = hh.degrees[2].dim == 0;
    r.h1_dim = hh.degrees[1].dim;
    r.applicable = r.connected && r.h2_vanishes;
    if (!r.applicable) return r;

    QuotientSpace q0 = dr_space(A, 0, weight);
    QuotientSpace q1 = dr_space(A, 1, weight);
    QuotientSpace q2 = dr_space(A, 2, weight);
    QuotientSpace q3 = dr_space(A, 3, weight);
    Mat d0 = descended_d(A, q0, q1);
    Mat d1 = descended_d(A, q1, q2);
    Mat d2 = descended_d(A, q2, q3);
    r.closed_dr1 = static_cast<int>(kernel_basis(d1).size());
    r.exact_dr1 = rank(d0);
    r.closed_dr2 = static_cast<int>(kernel_basis(d2).size());
    r.commutator_dim = static_cast<int>(commutator_subspace(A, 0, weight).size());
    r.dims_match = r.closed_dr1 == r.exact_dr1 && r.closed_dr1 == r.h1_dim &&
                   r.closed_dr2 == r.commutator_dim;
    r.d_surjective = rank(d1) == r.closed_dr2;
    return r;
}

std::vector<int> cyclic_oracle_dims(const FinDimAlgebra& A, int n_max) {
    int dim = A.dim();
    // Full tensor powers with the signed cyclic rotation quotient.
    struct Q {
        Mat proj, sec;
        int dim;
    };
    auto tensor_dim = [&](int n) {
        int d = 1;
        for (int i = 0; i <= n; ++i) d *= dim;
        return d;
    };
    auto index_of = [&](const std::vector<int>& t) {
        int idx = 0;
        for (int s : t) idx = idx * dim + s;
        return idx;
    };
    std::vector<Q> quots;
    std::vector<Mat> bmats;
    for (int n = 0; n <= n_max + 1; ++n) {
        int N = tensor_dim(n);
        // Relations: v - sign * rotated(v) over the basis.
        std::vector<RatVec> rels;
        std::vector<int> tup(static_cast<std::size_t>(n + 1), 0);
        for (int idx = 0; idx < N; ++idx) {
            int rem = idx;
            for (int s = n; s >= 0; --s) {
                tup[static_cast<std::size_t>(s)] = rem % dim;
                rem /= dim;
            }
            std::vector<int> rot(tup.size());
            rot[0] = tup.back();
            for (std::size_t s = 1; s < tup.size(); ++s) rot[s] = tup[s - 1];
            RatVec rel(static_cast<std::size_t>(N), Rat(0));
            rel[static_cast<std::size_t>(idx)] += 1;
            rel[static_cast<std::size_t>(index_of(rot))] -= Rat(n % 2 ? -1 : 1);
            bool nonzero = false;
            for (const Rat& x : rel) nonzero = nonzero || x != 0;
            if (nonzero) rels.push_back(std::move(rel));
        }
        Mat R(static_cast<int>(rels.size()), N);
        for (std::size_t i = 0; i < rels.size(); ++i)
            for (int jx = 0; jx < N; ++jx) R.at(static_cast<int>(i), jx) = rels[i][static_cast<std::size_t>(jx)];
        Rref rr = rref(R);
        std::vector<bool> is_piv(static_cast<std::size_t>(N), false);
        for (int c : rr.pivot_cols) is_piv[static_cast<std::size_t>(c)] = true;
        std::vector<int> free_cols;
        for (int c = 0; c < N; ++c)
            if (!is_piv[static_cast<std::size_t>(c)]) free_cols.push_back(c);
        Q q;
        q.dim = static_cast<int>(free_cols.size());
        q.proj = Mat(q.dim, N);
        q.sec = Mat(N, q.dim);
        for (int i = 0; i < q.dim; ++i) {
            q.proj.at(i, free_cols[static_cast<std::size_t>(i)]) = 1;
            q.sec.at(free_cols[static_cast<std::size_t>(i)], i) = 1;
        }
        for (std::size_t p = 0; p < rr.pivot_cols.size(); ++p)
            for (int i = 0; i < q.dim; ++i)
                q.proj.at(i, rr.pivot_cols[p]) = -rr.m.at(static_cast<int>(p), free_cols[static_cast<std::size_t>(i)]);
        quots.push_back(std::move(q));

        // Full Hochschild boundary on the tensor power.
        if (n == 0) {
            bmats.push_back(Mat(0, N));
            continue;
        }
        int Nd = tensor_dim(n - 1);
        Mat b(Nd, N);
        for (int idx = 0; idx < N; ++idx) {
            int rem = idx;
            std::vector<int> t(static_cast<std::size_t>(n + 1));
            for (int s = n; s >= 0; --s) {
                t[static_cast<std::size_t>(s)] = rem % dim;
                rem /= dim;
            }
            for (int i = 0; i < n; ++i) {
                SparseVec prod = A.mul(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(i) + 1]);
                Rat sign(i % 2 ? -1 : 1);
                for (const auto& [bi, c] : prod) {
                    std::vector<int> nt;
                    for (int s = 0; s < i; ++s) nt.push_back(t[static_cast<std::size_t>(s)]);
                    nt.push_back(bi);
                    for (int s = i + 2; s <= n; ++s) nt.push_back(t[static_cast<std::size_t>(s)]);
                    b.at(index_of(nt), idx) += sign * c;
                }
            }
            SparseVec wrap = A.mul(t.back(), t[0]);
            Rat sign(n % 2 ? -1 : 1);
            for (const auto& [bi, c] : wrap) {
                std::vector<int> nt;
                nt.push_back(bi);
                for (int s = 1; s < n; ++s) nt.push_back(t[static_cast<std::size_t>(s)]);
                b.at(index_of(nt), idx) += sign * c;
            }
        }
        bmats.push_back(std::move(b));
    }
    ChainComplex C;
    C.lo = 0;
    for (int n = 0; n <= n_max + 1; ++n) {
        C.dims.push_back(quots[static_cast<std::size_t>(n)].dim);
        if (n == 0) {
            C.diff.push_back(Mat(0, C.dims[0]));
            continue;
        }
        Mat full = bmats[static_cast<std::size_t>(n)];
        Mat PD = quots[static_cast<std::size_t>(n) - 1].proj * full;
        const Q& qn = quots[static_cast<std::size_t>(n)];
        if (!((PD * (qn.sec * qn.proj)) == PD))
            throw InternalError("boundary does not factor through the cyclic quotient");
        C.diff.push_back(PD * qn.sec);
    }
    C.validate();
    std::vector<DegreeHomology> h = homology(C);
    std::vector<int> out;
    for (int n = 0; n <= n_max; ++n) out.push_back(h[static_cast<std::size_t>(n)].dim);
    return out;
}


HarmonicSuiteReport verify_harmonic_suite(const FinDimAlgebra& A, int n_max, int weight) {
    HarmonicSuiteReport rep;
    rep.n_max = n_max;
    rep.weight = weight;
    FormOps ops(A);
    std::vector<HarmonicDecomposition> h;
    for (int n = 0; n <= n_max + 1; ++n) h.push_back(harmonic_projector(A, n, weight));
    auto fail = [&](const std::string& what, int n) {
        if (rep.witness.empty())
            rep.witness = what + " at degree " + std::to_string(n) +
                          (weight >= 0 ? " weight " + std::to_string(weight) : "");
    };
    auto tick = [&](const std::string& what) { ++rep.checked[what]; };
    auto reduced0 = [&](Form f, int target) {
        if (target == 0) f.terms.erase(FormKey(1, '\0'));
        return f;
    };
    std::vector<Mat> dmat, Bmat, bmat, iomat;
    for (int n = 0; n <= n_max; ++n) {
        const int dim = h[static_cast<std::size_t>(n)].space.dim();
        const Mat& P = h[static_cast<std::size_t>(n)].P;
        const Mat& Pp = h[static_cast<std::size_t>(n)].Pperp;
        if (!((P * P) == P) || !((P + Pp) == Mat::identity(dim))) fail("projector", n);
        tick("projector idempotent");
        Mat d = operator_matrix(h[static_cast<std::size_t>(n)].space, h[static_cast<std::size_t>(n) + 1].space,
                                [&](const Form& w) { return ops.d(w); });
        Mat B = operator_matrix(h[static_cast<std::size_t>(n)].space, h[static_cast<std::size_t>(n) + 1].space,
                                [&](const Form& w) { return ops.connes_B(w); });
        dmat.push_back(d);
        Bmat.push_back(B);
        const Mat& P1 = h[static_cast<std::size_t>(n) + 1].P;
        const Mat& P1p = h[static_cast<std::size_t>(n) + 1].Pperp;
        if (!(P1p * d * P).all_zero() || !(P1 * d * Pp).all_zero()) fail("d stability", n);
        if (!(P1p * B * P).all_zero() || !(P1 * B * Pp).all_zero()) fail("B stability", n);
        tick("d and B stability");
        Mat nd = d;
        for (auto& row : nd.a)
            for (auto& v : row) v *= n + 1;
        if (!((B * P) == (nd * P))) fail("B vs (n+1) d on the harmonic piece", n);
        if (!(B * Pp).all_zero()) fail("B on the perpendicular piece", n);
        tick("B rescaling");
        if (n >= 1) {
            Mat b = operator_matrix(h[static_cast<std::size_t>(n)].space, h[static_cast<std::size_t>(n) - 1].space,
                                    [&](const Form& w) { return reduced0(ops.b(w), n - 1); });
            Mat io = operator_matrix(h[static_cast<std::size_t>(n)].space, h[static_cast<std::size_t>(n) - 1].space,
                                     [&](const Form& w) { return reduced0(ops.iota_delta(w), n - 1); });
            bmat.push_back(b);
            iomat.push_back(io);
            const Mat& P0 = h[static_cast<std::size_t>(n) - 1].P;
            const Mat& P0p = h[static_cast<std::size_t>(n) - 1].Pperp;
            if (!(P0p * b * P).all_zero() || !(P0 * b * Pp).all_zero()) fail("b stability", n);
            Mat nb = b;
            for (auto& row : nb.a)
                for (auto& v : row) v *= n;
            if (!((io * P) == (nb * P))) fail("contraction vs n b on the harmonic piece", n);
            if (!(io * Pp).all_zero()) fail("contraction on the perpendicular piece", n);
            tick("contraction rescaling");
        }
    }
    // (reduced forms, d) is acyclic in the window: run the complex with the
    // grading reversed so the differential lowers the index
    {
        ChainComplex C;
        C.lo = 0;
        for (int j = 0; j <= n_max; ++j) C.dims.push_back(h[static_cast<std::size_t>(n_max - j)].space.dim());
        C.diff.push_back(Mat(0, C.dims[0]));
        for (int j = 1; j <= n_max; ++j) C.diff.push_back(dmat[static_cast<std::size_t>(n_max - j)]);
        C.validate();
        std::vector<DegreeHomology> H = homology(C);
        for (int j = 1; j <= n_max; ++j)
            if (H[static_cast<std::size_t>(j)].dim != 0) fail("d-complex acyclicity", n_max - j);
        tick("d-complex acyclic");
    }
    // (perpendicular piece, b) is acyclic in the window
    {
        ChainComplex C;
        C.lo = 0;
        std::vector<Mat> projectors;
        for (int n = 0; n <= n_max; ++n) {
            C.dims.push_back(h[static_cast<std::size_t>(n)].space.dim());
            C.diff.push_back(n == 0 ? Mat(0, C.dims[0]) : bmat[static_cast<std::size_t>(n) - 1]);
            projectors.push_back(h[static_cast<std::size_t>(n)].Pperp);
        }
        C.validate();
        ChainComplex R = restrict_complex(C, projectors);
        std::vector<DegreeHomology> H = homology(R);
        for (int n = 0; n < n_max; ++n)
            if (H[static_cast<std::size_t>(n)].dim != 0) fail("perpendicular b-complex acyclicity", n);
        tick("perpendicular b-complex acyclic");
    }
    return rep;
}

} // namespace ncdr
