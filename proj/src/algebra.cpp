#include "ncdr/algebra.hpp"

#include <algorithm>
#include <cstdlib>
#include <tuple>

namespace ncdr {

void sv_add(SparseVec& dst, const SparseVec& src, const Rat& coeff) {
    if (is_zero(coeff) || src.empty()) return;
    SparseVec out;
    out.reserve(dst.size() + src.size());
    std::size_t i = 0, j = 0;
    while (i < dst.size() || j < src.size()) {
        if (j >= src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
            out.push_back(dst[i++]);
        } else if (i >= dst.size() || src[j].first < dst[i].first) {
            Rat c = src[j].second * coeff;
            if (!is_zero(c)) out.emplace_back(src[j].first, std::move(c));
            ++j;
        } else {
            Rat c = dst[i].second + src[j].second * coeff;
            if (!is_zero(c)) out.emplace_back(dst[i].first, std::move(c));
            ++i;
            ++j;
        }
    }
    dst = std::move(out);
}

SparseVec sv_scale(const SparseVec& v, const Rat& c) {
    SparseVec out;
    if (is_zero(c)) return out;
    out.reserve(v.size());
    for (const auto& [i, x] : v) out.emplace_back(i, x * c);
    return out;
}

RatVec sv_dense(const SparseVec& v, int dim) {
    RatVec d(dim, Rat(0));
    for (const auto& [i, x] : v) d[i] = x;
    return d;
}

SparseVec sv_from_dense(const RatVec& v) {
    SparseVec out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!is_zero(v[i])) out.emplace_back(static_cast<int>(i), v[i]);
    return out;
}

std::size_t size_limit() {
    static std::size_t lim = [] {
        if (const char* s = std::getenv("NCDR_SIZE_LIMIT")) {
            long v = std::atol(s);
            if (v > 0) return static_cast<std::size_t>(v);
        }
        return static_cast<std::size_t>(2'000'000);
    }();
    return lim;
}

SparseVec FinDimAlgebra::mul(const SparseVec& x, const SparseVec& y) const {
    SparseVec out;
    for (const auto& [i, cx] : x)
        for (const auto& [j, cy] : y) sv_add(out, mul(i, j), cx * cy);
    return out;
}

int FinDimAlgebra::max_weight() const {
    int m = 0;
    for (int w : weights) m = std::max(m, w);
    return m;
}

int FinDimAlgebra::index_of_word(const Word& w) const {
    auto it = word_index_.find(w);
    return it == word_index_.end() ? -1 : it->second;
}

SparseVec FinDimAlgebra::coords(const NCPoly& p) const {
    if (!word_backed) throw RewriteError("algebra has no word backend");
    NCPoly q = rs.reduce(p);
    SparseVec out;
    for (const auto& [w, c] : q.terms) {
        int idx = index_of_word(w);
        if (idx < 0) continue; // beyond the cap: truncates to 0
        sv_add(out, sv_unit(idx, c));
    }
    return out;
}

std::string FinDimAlgebra::element_str(const SparseVec& v) const {
    if (v.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [i, c] : v) {
        std::string cs = rat_str(c);
        if (!first) out += cs[0] == '-' ? " - " : " + ";
        else if (cs[0] == '-') out += "-";
        std::string mag = cs[0] == '-' ? cs.substr(1) : cs;
        if (mag == "1" && names[i] != "1") out += names[i];
        else out += mag + (names[i] == "1" ? "" : "*" + names[i]);
        first = false;
    }
    return out;
}

void FinDimAlgebra::check_axioms() const {
    int n = dim();
    for (int j = 0; j < n; ++j) {
        if (mul(0, j) != sv_unit(j) || mul(j, 0) != sv_unit(j))
            throw RewriteError("unit law violated at basis index " + std::to_string(j));
    }
    if (truncated) return; // associativity holds modulo the cap ideal only
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                SparseVec lhs = mul(mul(i, j), sv_unit(k));
                SparseVec rhs = mul(sv_unit(i), mul(j, k));
                if (lhs != rhs)
                    throw RewriteError("associativity violated at (" + std::to_string(i) + "," +
                                       std::to_string(j) + "," + std::to_string(k) + ")");
            }
}

FinDimAlgebra build_findim(const AlgebraPresentation& pres, int cap) {
    AlgebraPresentation p = pres;
    p.degree_cap = std::max(p.degree_cap, cap);
    FinDimAlgebra A;
    A.gens = p.gens;
    A.rs = complete_rewrite(p);
    A.word_backed = true;
    A.cap = cap;
    A.graded = p.homogeneous();

    // Enumerate normal words of weight <= cap, breadth-first by extension.
    std::vector<Word> words{Word()};
    for (std::size_t head = 0; head < words.size(); ++head) {
        for (std::size_t g = 0; g < A.gens.names.size(); ++g) {
            Word w = words[head] + static_cast<char>(g);
            if (A.gens.weight_of_word(w) > cap) continue;
            if (!A.rs.is_normal(w)) continue;
            words.push_back(w);
            if (words.size() > size_limit())
                throw SizeLimitError("basis size exceeds NCDR_SIZE_LIMIT");
        }
    }
    std::sort(words.begin(), words.end(),
              [&](const Word& a, const Word& b) { return A.rs.order().less(a, b); });
    A.basis_words = words;
    for (std::size_t i = 0; i < words.size(); ++i) {
        A.names.push_back(A.gens.word_str(words[i]));
        A.weights.push_back(A.gens.weight_of_word(words[i]));
        A.word_index_[words[i]] = static_cast<int>(i);
    }
    A.truncated = false;
    for (int w : A.weights)
        if (w == cap) A.truncated = true;

    int n = A.dim();
    A.table_.assign(n, std::vector<SparseVec>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            NCPoly prod = A.rs.reduce(NCPoly::word(words[i] + words[j]));
            SparseVec v;
            for (const auto& [w, c] : prod.terms) {
                int idx = A.index_of_word(w);
                if (idx >= 0) sv_add(v, sv_unit(idx, c)); // else truncated to 0
            }
            A.table_[i][j] = std::move(v);
        }
    A.check_axioms();
    return A;
}

FinDimAlgebra algebra_from_structure_constants(
    const std::vector<std::string>& basis_names,
    const std::vector<std::tuple<int, int, int, Rat>>& entries) {
    int n = static_cast<int>(basis_names.size());
    std::vector<std::vector<SparseVec>> table(n, std::vector<SparseVec>(n));
    for (const auto& [i, j, k, c] : entries) {
        if (i < 0 || i >= n || j < 0 || j >= n || k < 0 || k >= n)
            throw RewriteError("structure constant index out of range");
        sv_add(table[i][j], sv_unit(k, c));
    }
    // Locate the unit and move it to index 0.
    int unit = -1;
    for (int u = 0; u < n && unit < 0; ++u) {
        bool ok = true;
        for (int j = 0; j < n && ok; ++j)
            ok = table[u][j] == sv_unit(j) && table[j][u] == sv_unit(j);
        if (ok) unit = u;
    }
    if (unit < 0) throw RewriteError("no unit element in structure constants");
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::swap(perm[0], perm[unit]);
    std::vector<int> inv(n);
    for (int i = 0; i < n; ++i) inv[perm[i]] = i;

    FinDimAlgebra A;
    for (int i = 0; i < n; ++i) A.names.push_back(basis_names[perm[i]]);
    std::vector<std::vector<SparseVec>> t2(n, std::vector<SparseVec>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            SparseVec v;
            for (const auto& [k, c] : table[perm[i]][perm[j]]) sv_add(v, sv_unit(inv[k], c));
            t2[i][j] = std::move(v);
        }
    A.table_ = std::move(t2);
    A.check_axioms();
    return A;
}

} // namespace ncdr
