#include "ncdr/deform.hpp"

#include "ncdr/forms.hpp"

#include <algorithm>
#include <functional>

namespace ncdr {

namespace {

int ipow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

std::vector<int> decode(int idx, int n, int d) {
    std::vector<int> out(static_cast<std::size_t>(n));
    for (int j = n - 1; j >= 0; --j) {
        out[static_cast<std::size_t>(j)] = idx % d;
        idx /= d;
    }
    return out;
}

int encode(const std::vector<int>& t, int d) {
    int idx = 0;
    for (int i : t) idx = idx * d + i;
    return idx;
}

RatVec column(const Mat& m, int j) {
    RatVec v(static_cast<std::size_t>(m.rows));
    for (int i = 0; i < m.rows; ++i) v[static_cast<std::size_t>(i)] = m.at(i, j);
    return v;
}

// Product in the free-product algebra on dense tensor components: the last
// factor of u multiplies the first factor of w.
RatVec merge(const FinDimAlgebra& A, const RatVec& u, int k, const RatVec& w, int m) {
    int d = A.dim();
    int rest_dim = ipow(d, m - 1);
    RatVec out(static_cast<std::size_t>(ipow(d, k + m - 1)));
    for (std::size_t iu = 0; iu < u.size(); ++iu) {
        if (u[iu] == 0) continue;
        int last = static_cast<int>(iu) % d;
        int pre = static_cast<int>(iu) / d;
        for (std::size_t iw = 0; iw < w.size(); ++iw) {
            if (w[iw] == 0) continue;
            int first = static_cast<int>(iw) / rest_dim;
            int rest = static_cast<int>(iw) % rest_dim;
            for (const auto& [x, c] : A.mul(last, first))
                out[static_cast<std::size_t>((pre * d + x) * rest_dim + rest)] += u[iu] * w[iw] * c;
        }
    }
    return out;
}

RatVec act_left(const FinDimAlgebra& A, int a, const RatVec& v, int n) {
    int d = A.dim();
    int rest_dim = ipow(d, n - 1);
    RatVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        int first = static_cast<int>(i) / rest_dim;
        int rest = static_cast<int>(i) % rest_dim;
        for (const auto& [x, c] : A.mul(a, first))
            out[static_cast<std::size_t>(x * rest_dim + rest)] += v[i] * c;
    }
    return out;
}

RatVec act_right(const FinDimAlgebra& A, const RatVec& v, int a, int n) {
    (void)n;
    int d = A.dim();
    RatVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        int last = static_cast<int>(i) % d;
        int pre = static_cast<int>(i) / d;
        for (const auto& [x, c] : A.mul(last, a))
            out[static_cast<std::size_t>(pre * d + x)] += v[i] * c;
    }
    return out;
}

void put_column(Mat& m, int j, const RatVec& v) {
    for (int i = 0; i < m.rows; ++i) m.at(i, j) = v[static_cast<std::size_t>(i)];
}

// Flatten a cochain to one long coordinate vector (column-major).
RatVec flatten(const Cochain& f) {
    RatVec out(static_cast<std::size_t>(f.m.rows) * static_cast<std::size_t>(f.m.cols));
    for (int j = 0; j < f.m.cols; ++j)
        for (int i = 0; i < f.m.rows; ++i)
            out[static_cast<std::size_t>(j) * static_cast<std::size_t>(f.m.rows) +
                static_cast<std::size_t>(i)] = f.m.at(i, j);
    return out;
}

// Matrix of the coboundary from C^p(A, A^{ox k}) in flattened coordinates.
Mat coboundary_matrix(const FinDimAlgebra& A, int p, int k) {
    int dom_cols = tensor_dim(A, p), dom_rows = tensor_dim(A, k);
    int dom = dom_rows * dom_cols;
    Cochain probe(A, p, k);
    Cochain image = coboundary(A, probe);
    Mat M(image.m.rows * image.m.cols, dom);
    for (int j = 0; j < dom_cols; ++j)
        for (int i = 0; i < dom_rows; ++i) {
            Cochain e(A, p, k);
            e.m.at(i, j) = 1;
            RatVec fl = flatten(coboundary(A, e));
            for (std::size_t r = 0; r < fl.size(); ++r)
                M.at(static_cast<int>(r), j * dom_rows + i) = fl[r];
        }
    return M;
}

} // namespace

Cochain::Cochain(const FinDimAlgebra& A, int p_, int k_)
    : p(p_), k(k_), m(tensor_dim(A, k_), tensor_dim(A, p_)) {}

Cochain Cochain::operator+(const Cochain& o) const {
    if (p != o.p || k != o.k) throw InternalError("cochain bidegree mismatch");
    Cochain out = *this;
    out.m = m + o.m;
    return out;
}

Cochain Cochain::operator-(const Cochain& o) const {
    if (p != o.p || k != o.k) throw InternalError("cochain bidegree mismatch");
    Cochain out = *this;
    out.m = m - o.m;
    return out;
}

Cochain Cochain::scaled(const Rat& c) const {
    Cochain out = *this;
    for (auto& row : out.m.a)
        for (auto& x : row) x *= c;
    return out;
}

int tensor_dim(const FinDimAlgebra& A, int n) { return ipow(A.dim(), n); }

Cochain cup(const FinDimAlgebra& A, const Cochain& f, const Cochain& g) {
    int d = A.dim();
    Cochain out(A, f.p + g.p, f.k + g.k - 1);
    int gcols = tensor_dim(A, g.p);
    for (int j = 0; j < out.m.cols; ++j) {
        int jf = j / gcols, jg = j % gcols;
        put_column(out.m, j, merge(A, column(f.m, jf), f.k, column(g.m, jg), g.k));
    }
    (void)d;
    return out;
}

Cochain vdash(const FinDimAlgebra& A, const Cochain& f, const Cochain& g) {
    int d = A.dim();
    Cochain out(A, f.p + g.p - 1, f.k + g.k - 1);
    int rest_dim = ipow(d, g.k - 1);
    for (int j = 0; j < out.m.cols; ++j) {
        std::vector<int> a = decode(j, out.p, d);
        std::vector<int> J(a.begin() + (f.p - 1), a.end());
        RatVec w = column(g.m, encode(J, d));
        RatVec acc(static_cast<std::size_t>(out.m.rows));
        for (std::size_t iw = 0; iw < w.size(); ++iw) {
            if (w[iw] == 0) continue;
            int first = static_cast<int>(iw) / rest_dim;
            int rest = static_cast<int>(iw) % rest_dim;
            std::vector<int> I(a.begin(), a.begin() + (f.p - 1));
            I.push_back(first);
            RatVec u = column(f.m, encode(I, d));
            for (std::size_t iu = 0; iu < u.size(); ++iu)
                if (u[iu] != 0)
                    acc[iu * static_cast<std::size_t>(rest_dim) + static_cast<std::size_t>(rest)] +=
                        u[iu] * w[iw];
        }
        put_column(out.m, j, acc);
    }
    return out;
}

Cochain dashv(const FinDimAlgebra& A, const Cochain& f, const Cochain& g) {
    int d = A.dim();
    Cochain out(A, f.p + g.p - 1, f.k + g.k - 1);
    int gdim = tensor_dim(A, g.k);
    for (int j = 0; j < out.m.cols; ++j) {
        std::vector<int> a = decode(j, out.p, d);
        std::vector<int> I(a.begin(), a.begin() + f.p);
        RatVec u = column(f.m, encode(I, d));
        RatVec acc(static_cast<std::size_t>(out.m.rows));
        for (std::size_t iu = 0; iu < u.size(); ++iu) {
            if (u[iu] == 0) continue;
            int last = static_cast<int>(iu) % d;
            int pre = static_cast<int>(iu) / d;
            std::vector<int> J = {last};
            J.insert(J.end(), a.begin() + f.p, a.end());
            RatVec v = column(g.m, encode(J, d));
            for (std::size_t iv = 0; iv < v.size(); ++iv)
                if (v[iv] != 0)
                    acc[static_cast<std::size_t>(pre) * static_cast<std::size_t>(gdim) + iv] +=
                        u[iu] * v[iv];
        }
        put_column(out.m, j, acc);
    }
    return out;
}

Cochain vee(const FinDimAlgebra& A, const Cochain& f, const Cochain& g) {
    return dashv(A, f, g) - vdash(A, f, g);
}

Cochain coboundary(const FinDimAlgebra& A, const Cochain& f) {
    int d = A.dim();
    Cochain out(A, f.p + 1, f.k);
    for (int j = 0; j < out.m.cols; ++j) {
        std::vector<int> a = decode(j, f.p + 1, d);
        RatVec acc = act_left(A, a[0], column(f.m, encode({a.begin() + 1, a.end()}, d)), f.k);
        for (int i = 1; i <= f.p; ++i) {
            int sign = (i % 2 == 0) ? 1 : -1;
            for (const auto& [x, c] : A.mul(a[static_cast<std::size_t>(i - 1)],
                                            a[static_cast<std::size_t>(i)])) {
                std::vector<int> I(a.begin(), a.begin() + (i - 1));
                I.push_back(x);
                I.insert(I.end(), a.begin() + i + 1, a.end());
                RatVec v = column(f.m, encode(I, d));
                for (std::size_t r = 0; r < v.size(); ++r) acc[r] += Rat(sign) * c * v[r];
            }
        }
        int sign = (f.p % 2 == 0) ? -1 : 1; // (-1)^{p+1}
        RatVec last = act_right(A, column(f.m, encode({a.begin(), a.end() - 1}, d)),
                                a[static_cast<std::size_t>(f.p)], f.k);
        for (std::size_t r = 0; r < last.size(); ++r) acc[r] += Rat(sign) * last[r];
        put_column(out.m, j, acc);
    }
    return out;
}

Cochain multiplication_cochain(const FinDimAlgebra& A) {
    int d = A.dim();
    Cochain out(A, 2, 1);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (const auto& [x, c] : A.mul(i, j)) out.m.at(x, i * d + j) += c;
    return out;
}

Cochain random_cochain(const FinDimAlgebra& A, int p, int k, std::mt19937& rng) {
    Cochain out(A, p, k);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (auto& row : out.m.a)
        for (auto& x : row) x = coeff(rng);
    return out;
}

bool is_coboundary(const FinDimAlgebra& A, const Cochain& f) {
    Mat M = coboundary_matrix(A, f.p - 1, f.k);
    RatVec target = flatten(f);
    Mat t(static_cast<int>(target.size()), 1);
    for (std::size_t i = 0; i < target.size(); ++i) t.at(static_cast<int>(i), 0) = target[i];
    return solve_many(M, t).has_value();
}

DgReport verify_dg_suite(const FinDimAlgebra& A, unsigned seed, int tuples) {
    DgReport r;
    r.seed = seed;
    std::mt19937 rng(seed);
    int d = A.dim();
    // Keep the largest intermediate tensor space manageable.
    auto pick = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    int kmax = d <= 2 ? 3 : 2;
    auto note = [&](const std::string& label, bool okay) {
        ++r.checked[label];
        if (!okay && r.witness.empty()) r.witness = label;
    };
    for (int t = 0; t < tuples; ++t) {
        int p = pick(2, 3), q = pick(2, 3), rr = pick(2, 2);
        int k = pick(2, kmax), m = pick(2, kmax), l = pick(2, kmax);
        Cochain f = random_cochain(A, p, k, rng);
        Cochain g = random_cochain(A, q, m, rng);
        Cochain h = random_cochain(A, rr, l, rng);
        note("vee associativity", vee(A, f, vee(A, g, h)) == vee(A, vee(A, f, g), h));
        Cochain bf = coboundary(A, f), bg = coboundary(A, g);
        Rat sgn((p % 2 == 1) ? 1 : -1); // (-1)^{p-1}
        note("dg Leibniz",
             coboundary(A, vee(A, f, g)) == vee(A, bf, g) + vee(A, f, bg).scaled(sgn));
        note("cup-vee compatibility",
             vee(A, cup(A, f, g), h) == cup(A, f, vee(A, g, h)) &&
                 vee(A, f, cup(A, g, h)) == cup(A, vee(A, f, g), h));
        note("mutual associativity",
             vdash(A, f, vdash(A, g, h)) == vdash(A, vdash(A, f, g), h) &&
                 dashv(A, f, dashv(A, g, h)) == dashv(A, dashv(A, f, g), h) &&
                 vdash(A, f, dashv(A, g, h)) == dashv(A, vdash(A, f, g), h) &&
                 dashv(A, f, vdash(A, g, h)) == vdash(A, dashv(A, f, g), h));
        // Leibniz defect of the half-composites: the cup term appears with
        // opposite signs on the two sides.
        Cochain lhs1 = vdash(A, bf, g) + vdash(A, f, bg).scaled(sgn);
        Cochain rhs1 = coboundary(A, vdash(A, f, g)) + cup(A, f, g).scaled(Rat((p % 2 == 1) ? 1 : -1));
        note("half-composite Leibniz (left)", lhs1 == rhs1);
        Cochain lhs2 = dashv(A, bf, g) + dashv(A, f, bg).scaled(sgn);
        Cochain rhs2 = coboundary(A, dashv(A, f, g)) + cup(A, f, g).scaled(sgn);
        note("half-composite Leibniz (right)", lhs2 == rhs2);
        note("cup associativity", cup(A, cup(A, f, g), h) == cup(A, f, cup(A, g, h)));
        note("cup-half compatibilities",
             vdash(A, f, cup(A, g, h)) == cup(A, vdash(A, f, g), h) &&
                 dashv(A, f, cup(A, g, h)) == cup(A, dashv(A, f, g), h) &&
                 cup(A, f, vdash(A, g, h)) == vdash(A, cup(A, f, g), h) &&
                 cup(A, f, dashv(A, g, h)) == dashv(A, cup(A, f, g), h));
        note("square zero", coboundary(A, bf).zero());
        auto [bp, bk] = cup(A, f, g).bidegree();
        note("bidegree additivity",
             bp == p + q && bk == (2 * k - 2) + (2 * m - 2));
        ++r.tuples;
    }
    // Cup products of cocycles die on cohomology: sample kernel elements of
    // the coboundary and solve for a primitive of their cup product.
    {
        Mat M = coboundary_matrix(A, 2, 2);
        std::vector<RatVec> ker = kernel_basis(M);
        std::uniform_int_distribution<int> coeff(-2, 2);
        for (int t = 0; t < 3 && !ker.empty(); ++t) {
            auto sample = [&]() {
                Cochain c(A, 2, 2);
                RatVec fl(static_cast<std::size_t>(M.cols));
                for (const RatVec& kv : ker) {
                    Rat w(coeff(rng));
                    for (std::size_t i = 0; i < fl.size(); ++i) fl[i] += w * kv[i];
                }
                int rows = c.m.rows;
                for (int j = 0; j < c.m.cols; ++j)
                    for (int i = 0; i < rows; ++i)
                        c.m.at(i, j) = fl[static_cast<std::size_t>(j * rows + i)];
                return c;
            };
            Cochain f = sample(), g = sample();
            if (!coboundary(A, f).zero() || !coboundary(A, g).zero())
                throw InternalError("kernel sample is not a cocycle");
            note("cup nullity on cocycles", is_coboundary(A, cup(A, f, g)));
        }
    }
    return r;
}

FirstOrderReport first_order(const FinDimAlgebra& A, const Cochain& beta) {
    if (beta.p != 2 || beta.k != 2) throw InternalError("first-order datum must sit in C^2(A, A ox A)");
    FirstOrderReport r;
    r.cocycle = coboundary(A, beta).zero();
    int d = A.dim();
    int n = d + d * d; // basis of A + (A ox A)
    // product of basis elements, dense output
    auto star = [&](int i, int j) {
        RatVec out(static_cast<std::size_t>(n));
        bool ia = i < d, ja = j < d;
        if (ia && ja) {
            for (const auto& [x, c] : A.mul(i, j)) out[static_cast<std::size_t>(x)] += c;
            RatVec b = column(beta.m, i * d + j);
            for (std::size_t r2 = 0; r2 < b.size(); ++r2) out[static_cast<std::size_t>(d) + r2] += b[r2];
        } else if (ia && !ja) {
            int w = j - d;
            int v1 = w / d, v2 = w % d;
            for (const auto& [x, c] : A.mul(i, v1)) out[static_cast<std::size_t>(d + x * d + v2)] += c;
        } else if (!ia && ja) {
            int w = i - d;
            int u1 = w / d, u2 = w % d;
            for (const auto& [x, c] : A.mul(u2, j)) out[static_cast<std::size_t>(d + u1 * d + x)] += c;
        }
        return out;
    };
    auto star_vec = [&](const RatVec& u, int j) {
        RatVec out(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            if (u[static_cast<std::size_t>(i)] == 0) continue;
            RatVec s = star(i, j);
            for (std::size_t r2 = 0; r2 < s.size(); ++r2)
                out[r2] += u[static_cast<std::size_t>(i)] * s[r2];
        }
        return out;
    };
    auto vec_star = [&](int i, const RatVec& u) {
        RatVec out(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            if (u[static_cast<std::size_t>(j)] == 0) continue;
            RatVec s = star(i, j);
            for (std::size_t r2 = 0; r2 < s.size(); ++r2)
                out[r2] += u[static_cast<std::size_t>(j)] * s[r2];
        }
        return out;
    };
    r.associative = true;
    for (int i = 0; i < n && r.associative; ++i)
        for (int j = 0; j < n && r.associative; ++j)
            for (int l = 0; l < n; ++l) {
                if (star_vec(star(i, j), l) != vec_star(i, star(j, l))) {
                    r.associative = false;
                    r.witness = {i, j, l};
                    break;
                }
            }
    return r;
}

bool first_order_equivalent(const FinDimAlgebra& A, const Cochain& beta, const Cochain& gamma) {
    return is_coboundary(A, beta - gamma);
}

McReport mc_check(const FinDimAlgebra& A, const std::vector<Cochain>& betas) {
    McReport r;
    r.order = static_cast<int>(betas.size());
    for (int m = 1; m <= r.order; ++m) {
        const Cochain& bm = betas[static_cast<std::size_t>(m - 1)];
        if (bm.p != 2 || bm.k != m + 1)
            throw InternalError("order-m structure map must sit in C^2(A, A^{ox(m+1)})");
        Cochain rhs(A, 3, m + 1);
        for (int i = 1; i < m; ++i)
            rhs = rhs + vee(A, betas[static_cast<std::size_t>(i - 1)],
                            betas[static_cast<std::size_t>(m - i - 1)]);
        if (r.first_fail == 0 && !coboundary(A, rhs).zero()) r.obstructions_are_cocycles = false;
        if (r.first_fail == 0 && !(coboundary(A, bm) == rhs)) r.first_fail = m;
    }
    return r;
}

namespace {

// ----- truncated free-product arithmetic on slot words ---------------------

void telem_axpy(TElem& dst, const TElem& src, const Rat& c) {
    for (const auto& [w, v] : src.terms) dst.add(w, v * c);
}

TElem word_elem(const TWord& w) {
    TElem e;
    e.add(w, 1);
    return e;
}

TElem dense_to_telem(const RatVec& v, int slots, int d) {
    TElem out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        out.add(decode(static_cast<int>(i), slots, d), v[i]);
    }
    return out;
}

// Junction product u * v in the free product: the last slot of u multiplies
// the first slot of v; words longer than max_slots truncate to zero.
TElem at_mul(const FinDimAlgebra& A, const TElem& u, const TElem& v, int max_slots) {
    TElem out;
    for (const auto& [uw, cu] : u.terms)
        for (const auto& [vw, cv] : v.terms) {
            if (static_cast<int>(uw.size() + vw.size()) - 1 > max_slots) continue;
            for (const auto& [x, c] : A.mul(uw.back(), vw.front())) {
                TWord w(uw.begin(), uw.end() - 1);
                w.push_back(x);
                w.insert(w.end(), vw.begin() + 1, vw.end());
                out.add(w, cu * cv * c);
            }
        }
    return out;
}

// Deformation part of the star product: insert each structure map at the
// junction of the two words.
TElem beta_splice(const FinDimAlgebra& A, const std::vector<Cochain>& betas, const TElem& u,
                  const TElem& v, int max_slots) {
    int d = A.dim();
    TElem out;
    for (std::size_t k = 1; k <= betas.size(); ++k) {
        const Cochain& b = betas[k - 1];
        for (const auto& [uw, cu] : u.terms)
            for (const auto& [vw, cv] : v.terms) {
                int slots = static_cast<int>(uw.size() + vw.size() + k) - 1;
                if (slots > max_slots) continue;
                RatVec img = column(b.m, uw.back() * d + vw.front());
                for (std::size_t i = 0; i < img.size(); ++i) {
                    if (img[i] == 0) continue;
                    std::vector<int> mid = decode(static_cast<int>(i), b.k, d);
                    TWord w(uw.begin(), uw.end() - 1);
                    w.insert(w.end(), mid.begin(), mid.end());
                    w.insert(w.end(), vw.begin() + 1, vw.end());
                    out.add(w, cu * cv * img[i]);
                }
            }
    }
    return out;
}

TElem star(const FinDimAlgebra& A, const std::vector<Cochain>& betas, const TElem& u,
           const TElem& v, int max_slots) {
    TElem out = at_mul(A, u, v, max_slots);
    telem_axpy(out, beta_splice(A, betas, u, v, max_slots), 1);
    return out;
}

// Slotwise extension of a 1-cochain: replace one slot by its image word.
// Unit slots are skipped (the extension requires the map to kill the unit).
TElem phi_extend(const FinDimAlgebra& A, const Cochain& phi, const TElem& u, int max_slots) {
    int d = A.dim();
    TElem out;
    for (const auto& [uw, cu] : u.terms) {
        if (static_cast<int>(uw.size()) + phi.k - 1 > max_slots) continue;
        for (std::size_t s = 0; s < uw.size(); ++s) {
            if (uw[s] == 0) continue;
            RatVec img = column(phi.m, uw[s]);
            for (std::size_t i = 0; i < img.size(); ++i) {
                if (img[i] == 0) continue;
                std::vector<int> mid = decode(static_cast<int>(i), phi.k, d);
                TWord w(uw.begin(), uw.begin() + static_cast<long>(s));
                w.insert(w.end(), mid.begin(), mid.end());
                w.insert(w.end(), uw.begin() + static_cast<long>(s) + 1, uw.end());
                out.add(w, cu * img[i]);
            }
        }
    }
    return out;
}

// Slotwise multiplicative extension of Id + sum of the phis: every slot is
// substituted independently, which keeps the map junction-local (it commutes
// with splitting at any parameter). Its linearization is phi_extend.
TElem f_apply(const FinDimAlgebra& A, const std::vector<Cochain>& phis, const TElem& u,
              int max_slots) {
    int d = A.dim();
    TElem out;
    for (const auto& [uw, cu] : u.terms) {
        std::vector<std::pair<TWord, Rat>> acc = {{TWord{}, cu}};
        for (std::size_t s = 0; s < uw.size(); ++s) {
            int slots_left = static_cast<int>(uw.size() - s) - 1;
            std::vector<std::pair<TWord, Rat>> nxt;
            for (const auto& [w, c] : acc) {
                if (static_cast<int>(w.size()) + 1 + slots_left <= max_slots) {
                    TWord nw = w;
                    nw.push_back(uw[s]);
                    nxt.push_back({std::move(nw), c});
                }
                if (uw[s] == 0) continue; // the substitution fixes the unit
                for (const Cochain& phi : phis) {
                    if (static_cast<int>(w.size()) + phi.k + slots_left > max_slots) continue;
                    RatVec img = column(phi.m, uw[s]);
                    for (std::size_t i = 0; i < img.size(); ++i) {
                        if (img[i] == 0) continue;
                        std::vector<int> mid = decode(static_cast<int>(i), phi.k, d);
                        TWord nw = w;
                        nw.insert(nw.end(), mid.begin(), mid.end());
                        nxt.push_back({std::move(nw), c * img[i]});
                    }
                }
            }
            acc = std::move(nxt);
        }
        for (auto& [w, c] : acc) out.add(w, c);
    }
    return out;
}

TElem f_inverse(const FinDimAlgebra& A, const std::vector<Cochain>& phis, const TElem& y,
                int max_slots) {
    TElem x = y;
    for (int it = 0; it <= max_slots; ++it) {
        TElem nx = y - (f_apply(A, phis, x, max_slots) - x);
        x = std::move(nx);
    }
    if (!(f_apply(A, phis, x, max_slots) == y))
        throw InternalError("gauge map did not invert within the truncation");
    return x;
}

TElem value_of(const FinDimAlgebra& A, const std::vector<Cochain>& maps, int col) {
    TElem out;
    for (const Cochain& c : maps) telem_axpy(out, dense_to_telem(column(c.m, col), c.k, A.dim()), 1);
    return out;
}

std::vector<Cochain> split_orders(const FinDimAlgebra& A, int order, int arity,
                                  const std::function<TElem(int)>& value) {
    int d = A.dim();
    std::vector<Cochain> out;
    for (int m = 1; m <= order; ++m) out.emplace_back(A, arity, m + 1);
    for (int col = 0; col < ipow(d, arity); ++col) {
        TElem v = value(col);
        for (const auto& [w, c] : v.terms) {
            int m = static_cast<int>(w.size()) - 1;
            if (m < 1 || m > order) throw InternalError("value outside the truncation orders");
            out[static_cast<std::size_t>(m - 1)].m.at(encode(w, d), col) = c;
        }
    }
    return out;
}

} // namespace

std::vector<Cochain> gauge_transport(const FinDimAlgebra& A, const std::vector<Cochain>& betas,
                                     const std::vector<Cochain>& phis, int order) {
    int d = A.dim();
    int M = order + 1;
    return split_orders(A, order, 2, [&](int col) {
        int a = col / d, b = col % d;
        TElem fa = f_apply(A, phis, word_elem({a}), M);
        TElem fb = f_apply(A, phis, word_elem({b}), M);
        TElem g = f_inverse(A, phis, star(A, betas, fa, fb, M), M);
        // Strip the undeformed product, which must reappear untouched.
        TElem plain;
        for (const auto& [x, c] : A.mul(a, b)) plain.add({x}, c);
        TElem rest = g - plain;
        for (const auto& [w, c] : rest.terms)
            if (w.size() == 1) throw InternalError("transport disturbed the order-zero product");
        return rest;
    });
}

std::vector<Cochain> gauge_linear(const FinDimAlgebra& A, const std::vector<Cochain>& betas,
                                  const std::vector<Cochain>& phis, int order) {
    int d = A.dim();
    int M = order + 1;
    return split_orders(A, order, 2, [&](int col) {
        int a = col / d, b = col % d;
        TElem pa = value_of(A, phis, a);
        TElem pb = value_of(A, phis, b);
        TElem out = at_mul(A, pa, word_elem({b}), M);
        telem_axpy(out, at_mul(A, word_elem({a}), pb, M), 1);
        for (const auto& [x, c] : A.mul(a, b)) telem_axpy(out, value_of(A, phis, x), -c);
        telem_axpy(out, beta_splice(A, betas, pa, word_elem({b}), M), 1);
        telem_axpy(out, beta_splice(A, betas, word_elem({a}), pb, M), 1);
        TElem bval;
        for (std::size_t k = 1; k <= betas.size(); ++k)
            telem_axpy(bval, dense_to_telem(column(betas[k - 1].m, col), betas[k - 1].k, d), 1);
        for (const Cochain& phi : phis) telem_axpy(out, phi_extend(A, phi, bval, M), -1);
        return out;
    });
}

GeneratorSet extended_gens(const DeformationDatum& d, int t_weight) {
    GeneratorSet g = d.base.gens;
    std::string name = "t";
    while (g.index_of(name) >= 0) name += "_";
    g.names.push_back(name);
    g.weights.push_back(t_weight);
    return g;
}

FinDimAlgebra build_A_phi(const DeformationDatum& d, int cap, int t_weight) {
    if (d.phi.size() != d.base.relations.size())
        throw InternalError("one deformation value per relation required");
    GeneratorSet ext = extended_gens(d, t_weight);
    char t = static_cast<char>(ext.names.size() - 1);
    AlgebraPresentation pres;
    pres.gens = ext;
    pres.degree_cap = cap;
    pres.param_letter = static_cast<int>(ext.names.size()) - 1;
    for (std::size_t i = 0; i < d.base.relations.size(); ++i) {
        for (const auto& [w, c] : d.phi[i].terms)
            if (w.find(t) == Word::npos)
                throw InternalError("deformation values must lie in the augmentation ideal");
        pres.relations.push_back(d.base.relations[i] - d.phi[i]);
    }
    FinDimAlgebra out = build_findim(pres, cap);
    if (!out.rs.confluent_below_cap)
        throw RewriteError("deformation rewriting not confluent below the cap");
    return out;
}

FlatnessReport flatness_check(const DeformationDatum& d, int cap, int t_weight) {
    FlatnessReport r;
    r.orders = d.t_order;
    r.cap = cap;
    FinDimAlgebra B = build_A_phi(d, cap, t_weight);
    FinDimAlgebra A = build_findim(d.base, cap);
    char t = static_cast<char>(extended_gens(d, t_weight).names.size() - 1);
    // Count deformation basis words by parameter order and total weight.
    std::map<std::pair<int, int>, long> got;
    for (std::size_t i = 0; i < B.basis_words.size(); ++i) {
        const Word& w = B.basis_words[i];
        int m = static_cast<int>(std::count(w.begin(), w.end(), t));
        ++got[{m, B.weights[i]}];
    }
    // Free-product count: tuples over the base basis, weights convolved.
    std::vector<long> aw(static_cast<std::size_t>(cap + 1), 0);
    for (int i = 0; i < A.dim(); ++i) ++aw[static_cast<std::size_t>(A.weights[i])];
    std::vector<long> conv = aw; // one slot
    for (int m = 0; m <= d.t_order; ++m) {
        if (m * t_weight > cap) break;
        for (int w = m * t_weight; w <= cap; ++w) {
            long want = conv[static_cast<std::size_t>(w - m * t_weight)];
            long have = 0;
            auto it = got.find({m, w});
            if (it != got.end()) have = it->second;
            if (want != have) r.mismatches.push_back({m, w});
        }
        // convolve one more slot
        std::vector<long> next(static_cast<std::size_t>(cap + 1), 0);
        for (int u = 0; u <= cap; ++u)
            for (int v = 0; u + v <= cap; ++v)
                next[static_cast<std::size_t>(u + v)] +=
                    conv[static_cast<std::size_t>(u)] * aw[static_cast<std::size_t>(v)];
        conv = std::move(next);
    }
    return r;
}

namespace {

// Index helpers for the three-term bimodule resolution.
struct AnickSpaces {
    int d, nV, nL;
    int p2() const { return d * nL * d; }
    int p1() const { return d * nV * d; }
    int p0() const { return d * d; }
};

} // namespace

AnickReport anick(const AlgebraPresentation& pres, int cap) {
    if (!pres.homogeneous()) throw InternalError("resolution requires homogeneous relations");
    AnickReport r;
    FinDimAlgebra A = build_findim(pres, cap);
    int d = A.dim();
    int nV = static_cast<int>(pres.gens.names.size());
    int nL = static_cast<int>(pres.relations.size());
    std::vector<int> relw;
    for (const auto& rel : pres.relations) {
        const Word* lw = rel.leading_word(pres.gens);
        relw.push_back(lw ? pres.gens.weight_of_word(*lw) : 0);
    }
    std::vector<int> genidx(static_cast<std::size_t>(nV));
    for (int v = 0; v < nV; ++v) genidx[static_cast<std::size_t>(v)] = A.index_of_word(Word(1, static_cast<char>(v)));

    AnickSpaces S{d, nV, nL};
    // alpha: A ox L ox A -> A ox V ox A
    Mat alpha(S.p1(), S.p2());
    for (int a = 0; a < d; ++a)
        for (int s = 0; s < nL; ++s)
            for (int b = 0; b < d; ++b) {
                int col = (a * nL + s) * d + b;
                for (const auto& [word, c] : pres.relations[static_cast<std::size_t>(s)].terms)
                    for (std::size_t i = 0; i < word.size(); ++i) {
                        SparseVec left =
                            A.mul(sv_unit(a), A.coords(NCPoly::word(word.substr(0, i))));
                        SparseVec right =
                            A.mul(A.coords(NCPoly::word(word.substr(i + 1))), sv_unit(b));
                        int v = word[i];
                        for (const auto& [x, cx] : left)
                            for (const auto& [y, cy] : right)
                                alpha.at((x * nV + v) * d + y, col) += c * cx * cy;
                    }
            }
    // delta: A ox V ox A -> A ox A
    Mat delta(S.p0(), S.p1());
    for (int a = 0; a < d; ++a)
        for (int v = 0; v < nV; ++v)
            for (int b = 0; b < d; ++b) {
                int col = (a * nV + v) * d + b;
                int iv = genidx[static_cast<std::size_t>(v)];
                for (const auto& [x, c] : A.mul(a, iv)) delta.at(x * d + b, col) += c;
                for (const auto& [x, c] : A.mul(iv, b)) delta.at(a * d + x, col) -= c;
            }
    // mu: A ox A -> A
    Mat mu(d, S.p0());
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (const auto& [x, c] : A.mul(a, b)) mu.at(x, a * d + b) += c;

    auto wP2 = [&](int idx) {
        int b = idx % d, s = (idx / d) % nL, a = idx / (d * nL);
        return A.weights[a] + relw[static_cast<std::size_t>(s)] + A.weights[b];
    };
    auto wP1 = [&](int idx) {
        int b = idx % d, v = (idx / d) % nV, a = idx / (d * nV);
        return A.weights[a] + pres.gens.weights[static_cast<std::size_t>(v)] + A.weights[b];
    };
    auto wP0 = [&](int idx) { return A.weights[idx % d] + A.weights[idx / d]; };
    auto wA = [&](int idx) { return A.weights[idx]; };

    // Restrict a matrix to the weight-w slice of its domain and codomain.
    auto slice = [&](const Mat& M, const std::function<int(int)>& wdom,
                     const std::function<int(int)>& wcod, int w) {
        std::vector<int> cols, rows;
        for (int j = 0; j < M.cols; ++j)
            if (wdom(j) == w) cols.push_back(j);
        for (int i = 0; i < M.rows; ++i)
            if (wcod(i) == w) rows.push_back(i);
        Mat out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j)
                out.at(static_cast<int>(i), static_cast<int>(j)) = M.at(rows[i], cols[j]);
        return out;
    };

    Mat comp = delta * alpha;
    r.composition_zero = true;
    for (int j = 0; j < comp.cols; ++j) {
        if (wP2(j) > cap) continue;
        for (int i = 0; i < comp.rows; ++i)
            if (comp.at(i, j) != 0) r.composition_zero = false;
    }
    for (int w = 0; w <= cap; ++w) {
        Mat a_w = slice(alpha, wP2, wP1, w);
        Mat d_w = slice(delta, wP1, wP0, w);
        Mat m_w = slice(mu, wP0, wA, w);
        int ra = rank(a_w), rd = rank(d_w), rm = rank(m_w);
        bool exact = ra == a_w.cols                      // injectivity
                     && d_w.cols - rd == ra              // ker delta = im alpha
                     && m_w.cols - rm == rd              // ker mu = im delta
                     && rm == m_w.rows;                  // surjectivity
        (exact ? r.exact_weights : r.inexact_weights).push_back(w);
    }

    // Minimality: the relations meet the square of their ideal only in zero,
    // checked inside the truncated free algebra.
    {
        AlgebraPresentation fp;
        fp.gens = pres.gens;
        fp.degree_cap = cap;
        FinDimAlgebra F = build_findim(fp, cap);
        auto fcoords = [&](const NCPoly& p) { return sv_dense(F.coords(p), F.dim()); };
        std::vector<RatVec> j2;
        for (int s1 = 0; s1 < nL; ++s1)
            for (int s2 = 0; s2 < nL; ++s2) {
                int base = relw[static_cast<std::size_t>(s1)] + relw[static_cast<std::size_t>(s2)];
                for (int i = 0; i < F.dim(); ++i)
                    for (int j = 0; j < F.dim(); ++j)
                        for (int l = 0; l < F.dim(); ++l) {
                            if (F.weights[i] + F.weights[j] + F.weights[l] + base > cap) continue;
                            NCPoly prod = NCPoly::word(F.basis_words[static_cast<std::size_t>(i)]) *
                                          pres.relations[static_cast<std::size_t>(s1)] *
                                          NCPoly::word(F.basis_words[static_cast<std::size_t>(j)]) *
                                          pres.relations[static_cast<std::size_t>(s2)] *
                                          NCPoly::word(F.basis_words[static_cast<std::size_t>(l)]);
                            RatVec v = fcoords(prod);
                            bool nz = false;
                            for (const Rat& x : v)
                                if (x != 0) nz = true;
                            if (nz) j2.push_back(std::move(v));
                        }
            }
        std::vector<RatVec> all = j2;
        int lrank_alone = 0;
        {
            std::vector<RatVec> lvecs;
            for (const auto& rel : pres.relations) lvecs.push_back(fcoords(rel));
            Mat L(F.dim(), static_cast<int>(lvecs.size()));
            for (std::size_t j = 0; j < lvecs.size(); ++j)
                for (int i = 0; i < F.dim(); ++i) L.at(i, static_cast<int>(j)) = lvecs[j][static_cast<std::size_t>(i)];
            lrank_alone = rank(L);
            all.insert(all.end(), lvecs.begin(), lvecs.end());
        }
        Mat J2(F.dim(), static_cast<int>(j2.size()));
        for (std::size_t j = 0; j < j2.size(); ++j)
            for (int i = 0; i < F.dim(); ++i) J2.at(i, static_cast<int>(j)) = j2[j][static_cast<std::size_t>(i)];
        Mat All(F.dim(), static_cast<int>(all.size()));
        for (std::size_t j = 0; j < all.size(); ++j)
            for (int i = 0; i < F.dim(); ++i) All.at(i, static_cast<int>(j)) = all[j][static_cast<std::size_t>(i)];
        r.minimal = rank(All) == rank(J2) + lrank_alone;
    }

    // H^2 with A-ox-A coefficients from the dualized resolution: cokernel of
    // precomposition with alpha, per weight shift small enough to avoid the
    // truncation.
    int relw_max = relw.empty() ? 0 : *std::max_element(relw.begin(), relw.end());
    for (int s = -relw_max; nL > 0 && relw_max + s <= cap; ++s) {
        // domain: maps V -> (A ox A) raising weight by s; codomain: L likewise
        std::vector<std::pair<int, int>> dom, cod; // (generator/relation, m-index)
        for (int v = 0; v < nV; ++v)
            for (int i = 0; i < S.p0(); ++i)
                if (wP0(i) == pres.gens.weights[static_cast<std::size_t>(v)] + s) dom.push_back({v, i});
        for (int l = 0; l < nL; ++l)
            for (int i = 0; i < S.p0(); ++i)
                if (wP0(i) == relw[static_cast<std::size_t>(l)] + s) cod.push_back({l, i});
        Mat M(static_cast<int>(cod.size()), static_cast<int>(dom.size()));
        for (std::size_t j = 0; j < dom.size(); ++j) {
            auto [v, mi] = dom[j];
            int m1 = mi / d, m2 = mi % d;
            // alpha^*(f)(r) = sum over occurrences of generators in r of
            // prefix . f(v) . suffix with the outer action.
            for (int l = 0; l < nL; ++l)
                for (const auto& [word, c] : pres.relations[static_cast<std::size_t>(l)].terms)
                    for (std::size_t i = 0; i < word.size(); ++i) {
                        if (word[i] != static_cast<char>(v)) continue;
                        SparseVec left = A.mul(A.coords(NCPoly::word(word.substr(0, i))), sv_unit(m1));
                        SparseVec right = A.mul(sv_unit(m2), A.coords(NCPoly::word(word.substr(i + 1))));
                        for (const auto& [x, cx] : left)
                            for (const auto& [y, cy] : right) {
                                int row = -1;
                                for (std::size_t rix = 0; rix < cod.size(); ++rix)
                                    if (cod[rix].first == l && cod[rix].second == x * d + y)
                                        row = static_cast<int>(rix);
                                if (row >= 0) M.at(row, static_cast<int>(j)) += c * cx * cy;
                            }
                    }
        }
        r.h2_by_shift[s] = static_cast<int>(cod.size()) - rank(M);
    }
    return r;
}

EquivalenceReport equivalence_linear(const DeformationDatum& phi, const DeformationDatum& psi,
                                     int cap) {
    if (!(phi.base.gens.names == psi.base.gens.names) ||
        phi.base.relations.size() != psi.base.relations.size())
        throw InternalError("equivalence requires a common presentation");
    int N = std::min(phi.t_order, psi.t_order);
    FinDimAlgebra A = build_findim(phi.base, cap);
    int d = A.dim();
    int nV = static_cast<int>(phi.base.gens.names.size());
    int nL = static_cast<int>(phi.base.relations.size());
    char t = static_cast<char>(nV);

    // Basis of the truncated free product: slot words of order 1..N.
    std::vector<TWord> tbasis;
    std::map<TWord, int> tindex;
    {
        std::vector<TWord> cur;
        for (int i = 0; i < d; ++i) cur.push_back({i});
        for (int m = 1; m <= N; ++m) {
            std::vector<TWord> next;
            for (const TWord& w : cur)
                for (int i = 0; i < d; ++i) {
                    TWord nw = w;
                    nw.push_back(i);
                    next.push_back(nw);
                    tindex[nw] = static_cast<int>(tbasis.size());
                    tbasis.push_back(std::move(nw));
                }
            cur = std::move(next);
        }
    }
    int tdim = static_cast<int>(tbasis.size());
    int M = N + 1;

    auto telem_coords = [&](const TElem& e, RatVec& dst, int offset) {
        for (const auto& [w, c] : e.terms) {
            if (w.size() < 2) throw InternalError("value fell outside the augmentation ideal");
            auto it = tindex.find(w);
            if (it == tindex.end()) continue; // beyond the order cap
            dst[static_cast<std::size_t>(offset + it->second)] += c;
        }
    };

    // pi of an extended word: reduce the segments between parameter letters.
    auto project = [&](const NCPoly& p) {
        TElem out;
        for (const auto& [w, c] : p.terms) {
            std::vector<SparseVec> segs;
            Word seg;
            for (char ch : w) {
                if (ch == t) {
                    segs.push_back(A.coords(NCPoly::word(seg)));
                    seg.clear();
                } else {
                    seg.push_back(ch);
                }
            }
            segs.push_back(A.coords(NCPoly::word(seg)));
            if (static_cast<int>(segs.size()) > M) continue;
            std::vector<std::pair<TWord, Rat>> acc = {{TWord(), c}};
            for (const SparseVec& sv : segs) {
                std::vector<std::pair<TWord, Rat>> nxt;
                for (const auto& [wrd, cw] : acc)
                    for (const auto& [x, cx] : sv) {
                        TWord nw = wrd;
                        nw.push_back(x);
                        nxt.push_back({std::move(nw), cw * cx});
                    }
                acc = std::move(nxt);
            }
            for (auto& [wrd, cw] : acc) out.add(wrd, cw);
        }
        return out;
    };

    // Theta contribution of the unknown value e (a slot word) placed at
    // generator v, evaluated on each relation.
    auto theta_column = [&](int v, const TWord& val) {
        RatVec col(static_cast<std::size_t>(nL * tdim));
        TElem ve = word_elem(val);
        for (int s = 0; s < nL; ++s) {
            TElem total;
            for (const auto& [word, c] : phi.base.relations[static_cast<std::size_t>(s)].terms)
                for (std::size_t i = 0; i < word.size(); ++i) {
                    if (word[i] != static_cast<char>(v)) continue;
                    TElem left, right;
                    for (const auto& [x, cx] : A.coords(NCPoly::word(word.substr(0, i))))
                        left.add({x}, cx);
                    for (const auto& [x, cx] : A.coords(NCPoly::word(word.substr(i + 1))))
                        right.add({x}, cx);
                    TElem term = at_mul(A, at_mul(A, left, ve, M), right, M);
                    telem_axpy(total, term, c);
                }
            telem_coords(total, col, s * tdim);
        }
        return col;
    };

    std::vector<RatVec> cols;
    std::vector<std::pair<int, TWord>> unknowns;
    for (int v = 0; v < nV; ++v)
        for (const TWord& w : tbasis) {
            if (w.size() < 2) continue; // values lie in the augmentation ideal
            unknowns.push_back({v, w});
            cols.push_back(theta_column(v, w));
        }
    Mat Sys(nL * tdim, static_cast<int>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < Sys.rows; ++i) Sys.at(i, static_cast<int>(j)) = cols[j][static_cast<std::size_t>(i)];
    Mat rhs(nL * tdim, 1);
    for (int s = 0; s < nL; ++s) {
        TElem diff = project(phi.phi[static_cast<std::size_t>(s)] - psi.phi[static_cast<std::size_t>(s)]);
        RatVec col(static_cast<std::size_t>(nL * tdim));
        telem_coords(diff, col, s * tdim);
        for (int i = 0; i < Sys.rows; ++i) rhs.at(i, 0) += col[static_cast<std::size_t>(i)];
    }
    EquivalenceReport rep;
    auto sol = solve_many(Sys, rhs);
    rep.solvable = sol.has_value();
    if (rep.solvable) {
        rep.f.assign(static_cast<std::size_t>(nV), TElem{});
        for (std::size_t j = 0; j < unknowns.size(); ++j) {
            Rat c = sol->at(static_cast<int>(j), 0);
            if (c != 0) rep.f[static_cast<std::size_t>(unknowns[j].first)].add(unknowns[j].second, c);
        }
    }
    return rep;
}

} // namespace ncdr
