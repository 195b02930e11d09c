#include "ncdr/extended.hpp"

#include <algorithm>
#include <sstream>

namespace ncdr {

namespace {

int slot_degree(const FormKey& k) { return static_cast<int>(k.size()) - 1; }

} // namespace

ExtendedPiece ExtendedPiece::operator+(const ExtendedPiece& o) const {
    ExtendedPiece out = *this;
    for (const auto& [w, c] : o.terms) {
        Rat& r = out.terms[w];
        r += c;
        if (r == 0) out.terms.erase(w);
    }
    return out;
}

ExtendedPiece ExtendedPiece::operator-(const ExtendedPiece& o) const {
    ExtendedPiece out = *this;
    for (const auto& [w, c] : o.terms) {
        Rat& r = out.terms[w];
        r -= c;
        if (r == 0) out.terms.erase(w);
    }
    return out;
}

void ExtendedOps::add(ExtendedPiece& out, const ExtWord& w, const Rat& c) const {
    if (c == 0 || w.empty()) return;
    int total = ext_degree(w);
    ExtWord cur = w;
    int sign = 1;
    ExtWord best = cur;
    int best_sign = 1;
    bool torsion = false;
    for (std::size_t r = 1; r < w.size(); ++r) {
        int d0 = slot_degree(cur.front());
        // Moving the first slot past the rest of the word.
        if ((d0 & 1) && ((total - d0) & 1)) sign = -sign;
        std::rotate(cur.begin(), cur.begin() + 1, cur.end());
        if (cur < best) {
            best = cur;
            best_sign = sign;
        } else if (cur == best && sign != best_sign) {
            torsion = true;
        }
    }
    if (torsion) return;
    Rat& r = out.terms[best];
    r += c * best_sign;
    if (r == 0) out.terms.erase(best);
}

ExtendedPiece ExtendedOps::piece(const ExtWord& w, const Rat& c) const {
    ExtendedPiece out;
    add(out, w, c);
    return out;
}

ExtendedPiece ExtendedOps::d(const ExtendedPiece& x) const {
    ExtendedPiece out;
    for (const auto& [w, c] : x.terms) {
        int pre = 0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            Form dj = ops_.d(Form::basis(w[j]));
            Rat sc = c * ((pre & 1) ? Rat(-1) : Rat(1));
            for (const auto& [k, ck] : dj.terms) {
                ExtWord nw = w;
                nw[j] = k;
                add(out, nw, sc * ck);
            }
            pre += slot_degree(w[j]);
        }
    }
    return out;
}

ExtendedPiece ExtendedOps::i_delta(const ExtendedPiece& x) const {
    ExtendedPiece out;
    for (const auto& [w, c] : x.terms) {
        int pre = 0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            const FormKey& k = w[j];
            int m = slot_degree(k);
            for (int pos = 1; pos <= m; ++pos) {
                Rat sc = c * (((pre + pos - 1) & 1) ? Rat(-1) : Rat(1));
                FormKey left = k.substr(0, static_cast<std::size_t>(pos));
                FormKey tail = k.substr(static_cast<std::size_t>(pos) + 1);
                // Cutting da at this position: the left slot either ends
                // before a or absorbs it by right multiplication.
                FormKey right1 = FormKey(1, k[static_cast<std::size_t>(pos)]) + tail;
                ExtWord nw1(w.begin(), w.begin() + static_cast<long>(j));
                nw1.push_back(left);
                nw1.push_back(right1);
                nw1.insert(nw1.end(), w.begin() + static_cast<long>(j) + 1, w.end());
                add(out, nw1, sc);
                Form absorbed = ops_.right_mul(
                    Form::basis(left), static_cast<unsigned char>(k[static_cast<std::size_t>(pos)]));
                FormKey right2 = FormKey(1, '\0') + tail;
                for (const auto& [lk, lc] : absorbed.terms) {
                    ExtWord nw2(w.begin(), w.begin() + static_cast<long>(j));
                    nw2.push_back(lk);
                    nw2.push_back(right2);
                    nw2.insert(nw2.end(), w.begin() + static_cast<long>(j) + 1, w.end());
                    add(out, nw2, -sc * lc);
                }
            }
            pre += m;
        }
    }
    return out;
}

Form ExtendedOps::reclose(const ExtendedPiece& x) const {
    Form out;
    bool first = true;
    for (const auto& [w, c] : x.terms) {
        Form f = Form::basis(w[0]);
        for (std::size_t j = 1; j < w.size(); ++j) f = ops_.mul(f, Form::basis(w[j]));
        f *= c;
        if (first) {
            out = f;
            first = false;
        } else {
            out += f;
        }
    }
    return out;
}

std::string ExtendedOps::str(const ExtendedPiece& x) const {
    if (x.zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : x.terms) {
        if (!first) os << " + ";
        first = false;
        os << c << "*(";
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (j) os << " | ";
            os << ops_.form_str(Form::basis(w[j]));
        }
        os << ")";
    }
    return os.str();
}

} // namespace ncdr
