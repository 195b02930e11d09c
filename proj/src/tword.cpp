#include "ncdr/tword.hpp"

#include <stdexcept>

namespace ncdr {

TElem t_concat(const TElem& u, const TElem& v) {
    TElem out;
    for (const auto& [wu, cu] : u.terms)
        for (const auto& [wv, cv] : v.terms) {
            TWord w = wu;
            w.insert(w.end(), wv.begin(), wv.end());
            out.add(w, cu * cv);
        }
    return out;
}

TElem extend_t(const FinDimAlgebra& A, const Mat& f, const TElem& w, int fdeg) {
    int n = A.dim();
    if (f.rows != n || f.cols != n) throw std::invalid_argument("map shape does not match the algebra");
    for (int i = 0; i < n; ++i)
        if (f.at(i, 0) != 0) throw std::invalid_argument("map does not kill the unit");
    if (fdeg % 2 != 0 && !A.graded)
        throw std::invalid_argument("odd map degree needs a graded algebra");
    TElem out;
    for (const auto& [word, c] : w.terms) {
        int pre = 0;
        for (std::size_t k = 0; k < word.size(); ++k) {
            Rat sc = c * ((fdeg % 2 != 0 && pre % 2 != 0) ? Rat(-1) : Rat(1));
            for (int i = 0; i < n; ++i) {
                const Rat& fi = f.at(i, word[k]);
                if (fi == 0) continue;
                TWord nw = word;
                nw[k] = i;
                out.add(nw, sc * fi);
            }
            if (fdeg % 2 != 0) pre += A.weight(word[k]);
        }
    }
    return out;
}

} // namespace ncdr
