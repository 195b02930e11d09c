#include "ncdr/forms.hpp"

namespace ncdr {

Form FormOps::right_mul_key(const FormKey& k, int j) const {
    if (j == 0) return Form::basis(k);
    int n = form_degree(k);
    if (n == 0) {
        Form out(0);
        for (const auto& [idx, c] : A_.mul(static_cast<unsigned char>(k[0]), j))
            out.add(FormKey(1, static_cast<char>(idx)), c);
        return out;
    }
    // (alpha d a_n) * e_j = alpha * d(a_n e_j) - (alpha * a_n) d e_j
    int an = static_cast<unsigned char>(k.back());
    FormKey alpha = k.substr(0, k.size() - 1);
    Form out(n);
    for (const auto& [idx, c] : A_.mul(an, j))
        if (idx != 0) out.add(alpha + static_cast<char>(idx), c);
    Form shifted = right_mul_key(alpha, an); // degree n-1
    for (const auto& [key2, c] : shifted.terms) out.add(key2 + static_cast<char>(j), -c);
    return out;
}

Form FormOps::right_mul(const Form& w, int j) const {
    Form out(w.degree);
    for (const auto& [k, c] : w.terms) {
        Form part = right_mul_key(k, j);
        part *= c;
        out += part;
    }
    return out;
}

Form FormOps::right_mul(const Form& w, const SparseVec& a) const {
    Form out(w.degree);
    for (const auto& [j, c] : a) {
        Form part = right_mul(w, j);
        part *= c;
        out += part;
    }
    return out;
}

Form FormOps::left_mul(const SparseVec& a, const Form& w) const {
    Form out(w.degree);
    for (const auto& [k, c] : w.terms) {
        int a0 = static_cast<unsigned char>(k[0]);
        for (const auto& [j, cj] : a)
            for (const auto& [idx, cm] : A_.mul(j, a0)) {
                FormKey k2 = k;
                k2[0] = static_cast<char>(idx);
                out.add(k2, c * cj * cm);
            }
    }
    return out;
}

Form FormOps::mul(const Form& u, const Form& v) const {
    Form out(u.degree + v.degree);
    for (const auto& [kv, cv] : v.terms) {
        // u * (b0 db1...dbm) = (u * b0) db1...dbm
        Form head = right_mul(u, static_cast<unsigned char>(kv[0]));
        FormKey tail = kv.substr(1);
        for (const auto& [ku, cu] : head.terms) out.add(ku + tail, cu * cv);
    }
    return out;
}

Form FormOps::d(const Form& w) const {
    Form out(w.degree + 1);
    for (const auto& [k, c] : w.terms) {
        if (k[0] == 0) continue; // d kills the unit coefficient
        out.add(FormKey(1, '\0') + k, c);
    }
    return out;
}

Form FormOps::b(const Form& w) const {
    if (w.degree == 0) return Form(0);
    int n = w.degree;
    Rat sign = (n - 1) % 2 == 0 ? 1 : -1;
    Form out(n - 1);
    for (const auto& [k, c] : w.terms) {
        int an = static_cast<unsigned char>(k.back());
        FormKey alpha = k.substr(0, k.size() - 1);
        // alpha * a_n
        Form r = right_mul_key(alpha, an);
        r *= c * sign;
        out += r;
        // a_n * alpha
        int a0 = static_cast<unsigned char>(alpha[0]);
        for (const auto& [idx, cm] : A_.mul(an, a0)) {
            FormKey k2 = alpha;
            k2[0] = static_cast<char>(idx);
            out.add(k2, -c * sign * cm);
        }
    }
    return out;
}

Form FormOps::kappa(const Form& w) const {
    if (w.degree == 0) return w;
    int n = w.degree;
    Rat sign = (n - 1) % 2 == 0 ? 1 : -1;
    Form out(n);
    for (const auto& [k, c] : w.terms) {
        int an = static_cast<unsigned char>(k.back());
        int a0 = static_cast<unsigned char>(k[0]);
        FormKey mid = k.substr(1, k.size() - 2); // da1...da_{n-1} letters
        // (da_n) * a0 = d(a_n a0) - a_n d(a0)
        for (const auto& [idx, cm] : A_.mul(an, a0))
            if (idx != 0) out.add(FormKey(1, '\0') + static_cast<char>(idx) + mid, c * sign * cm);
        if (a0 != 0)
            out.add(FormKey(1, static_cast<char>(an)) + static_cast<char>(a0) + mid, -c * sign);
    }
    return out;
}

Form FormOps::kappa_pow(const Form& w, int i) const {
    Form r = w;
    for (int s = 0; s < i; ++s) r = kappa(r);
    return r;
}

Form FormOps::connes_B(const Form& w) const {
    Form dw = d(drop_unit(w));
    Form out = dw;
    Form cur = dw;
    for (int i = 1; i <= w.degree; ++i) {
        cur = kappa(cur);
        out += cur;
    }
    return out;
}

Form FormOps::iota_delta_sum(const Form& w) const {
    if (w.degree == 0) return Form(0);
    Form bw = b(w);
    Form out = bw;
    Form cur = bw;
    for (int i = 1; i < w.degree; ++i) {
        cur = kappa(cur);
        out += cur;
    }
    return out;
}

Form FormOps::iota_delta_direct(const Form& w) const {
    if (w.degree == 0) return Form(0);
    int n = w.degree;
    Form out(n - 1);
    for (const auto& [k, c] : w.terms) {
        for (int pos = 1; pos <= n; ++pos) {
            int ak = static_cast<unsigned char>(k[pos]);
            // psi = da_{pos+1}...da_n a0 da_1...da_{pos-1}
            Form left = Form::basis(FormKey(1, '\0') + k.substr(pos + 1)); // 1 da_{pos+1..n}
            Form right = Form::basis(k.substr(0, pos));                     // a0 da_{1..pos-1}
            Form psi = mul(left, right);
            // ad a_k(psi) with sign -(-1)^{(pos-1)(n-pos+1)}. This is the
            // unique sign pattern under which the commutator sum reproduces
            // the kappa-power-sum formula in every degree (they coincide with
            // (-1)^pos only for n <= 2); it also keeps the image
            // kappa-invariant and gives iota = n*b on kappa-invariant forms.
            Form comm = left_mul(sv_unit(ak), psi) - right_mul(psi, ak);
            comm *= c * Rat(((pos - 1) * (n - pos + 1)) % 2 == 0 ? -1 : 1);
            out += comm;
        }
    }
    return out;
}

Form FormOps::iota_delta(const Form& w) const {
    Form a = iota_delta_sum(w);
    Form bform = iota_delta_direct(w);
    if (!(a == bform))
        throw InternalError("iota_delta formula mismatch between the operator-sum and "
                            "commutator-sum evaluations");
    return a;
}

Form FormOps::iota_theta(const Form& w, const DoubleDerivation& th) const {
    int n = w.degree;
    if (n == 0) return Form(0);
    Form out(n - 1);
    for (const auto& [k, c] : w.terms) {
        for (int pos = 1; pos <= n; ++pos) {
            int ak = static_cast<unsigned char>(k[pos]);
            // Global negative of the exponent (pos-1)(n-pos+1); see the sign
            // discussion in iota_delta_direct, whose Delta-specialization this
            // must (and does) reproduce.
            Rat sign = ((pos - 1) * (n - pos + 1)) % 2 == 0 ? -1 : 1;
            for (const auto& [lft, rgt, ct] : th.values[ak]) {
                // i'(alpha_pos): for pos = 1 the 1-form is a0 da1, so the
                // left Sweedler component is multiplied by a0 on the left.
                // middle = alpha_{pos+1}...alpha_n alpha_1...alpha_{pos-1}
                Form acc(0);
                acc.add(FormKey(1, static_cast<char>(rgt)), c * ct * sign); // i'' component
                if (!k.substr(pos + 1).empty())
                    acc = mul(acc, Form::basis(FormKey(1, '\0') + k.substr(pos + 1)));
                if (pos > 1)
                    acc = mul(acc, Form::basis(k.substr(0, pos)));
                // trailing i' component
                if (pos == 1) {
                    // alpha_1 = a0 da1: i' = a0 * theta'(a1)
                    int a0 = static_cast<unsigned char>(k[0]);
                    for (const auto& [m, cm] : A_.mul(a0, lft)) {
                        Form t = right_mul(acc, m);
                        t *= cm;
                        out += t;
                    }
                } else {
                    out += right_mul(acc, lft);
                }
            }
        }
    }
    return out;
}

Form FormOps::lie_theta(const Form& w, const DoubleDerivation& th) const {
    return d(iota_theta(w, th)) + iota_theta(d(w), th);
}

Form FormOps::drop_unit(const Form& w) const {
    if (w.degree != 0) return w;
    Form out = w;
    out.terms.erase(FormKey(1, '\0'));
    return out;
}

std::string FormOps::form_str(const Form& w) const {
    if (w.zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : w.terms) {
        std::string cs = rat_str(c);
        if (!first) out += cs[0] == '-' ? " - " : " + ";
        else if (cs[0] == '-') out += "-";
        std::string mag = cs[0] == '-' ? cs.substr(1) : cs;
        std::string mono;
        if (k[0] != 0 || k.size() == 1) mono += A_.names[static_cast<unsigned char>(k[0])];
        for (std::size_t i = 1; i < k.size(); ++i) {
            if (!mono.empty()) mono += " ";
            mono += "d(" + A_.names[static_cast<unsigned char>(k[i])] + ")";
        }
        if (mono.empty()) mono = "1";
        out += (mag == "1" ? mono : mag + "*" + mono);
        first = false;
    }
    return out;
}

DoubleDerivation DoubleDerivation::distinguished(const FinDimAlgebra& A) {
    DoubleDerivation th;
    th.values.resize(A.dim());
    for (int i = 0; i < A.dim(); ++i) {
        if (i == 0) continue; // Delta(1) = 1(x)1 - 1(x)1 = 0
        th.values[i].emplace_back(0, i, Rat(1));
        th.values[i].emplace_back(i, 0, Rat(-1));
    }
    th.verified = true;
    return th;
}

DoubleDerivation DoubleDerivation::zero(const FinDimAlgebra& A) {
    DoubleDerivation th;
    th.values.resize(A.dim());
    th.verified = true;
    return th;
}

namespace {

using Tensor2 = std::map<std::pair<int, int>, Rat>;

void t2_add(Tensor2& t, int p, int q, const Rat& c) {
    if (is_zero(c)) return;
    auto key = std::make_pair(p, q);
    auto it = t.find(key);
    if (it == t.end()) t.emplace(key, c);
    else {
        it->second += c;
        if (is_zero(it->second)) t.erase(it);
    }
}

Tensor2 theta_of(const DoubleDerivation& th, const SparseVec& a) {
    Tensor2 out;
    for (const auto& [i, c] : a)
        for (const auto& [p, q, ct] : th.values[i]) t2_add(out, p, q, c * ct);
    return out;
}

// Outer bimodule action on A(x)A.
Tensor2 t2_right(const FinDimAlgebra& A, const Tensor2& t, int j) {
    Tensor2 out;
    for (const auto& [pq, c] : t)
        for (const auto& [m, cm] : A.mul(pq.second, j)) t2_add(out, pq.first, m, c * cm);
    return out;
}
Tensor2 t2_left(const FinDimAlgebra& A, int j, const Tensor2& t) {
    Tensor2 out;
    for (const auto& [pq, c] : t)
        for (const auto& [m, cm] : A.mul(j, pq.first)) t2_add(out, m, pq.second, c * cm);
    return out;
}

} // namespace

DoubleDerivation DoubleDerivation::from_generators(
    const FinDimAlgebra& A, const std::vector<std::vector<std::tuple<int, int, Rat>>>& gen_values) {
    if (!A.word_backed) throw RewriteError("Leibniz extension needs a word-backed algebra");
    DoubleDerivation th;
    th.values.resize(A.dim());
    // Basis words are ordered compatibly with suffix truncation? Not in
    // general; recurse on word structure instead.
    std::function<Tensor2(const Word&)> val = [&](const Word& w) -> Tensor2 {
        Tensor2 out;
        if (w.empty()) return out;
        int g = static_cast<unsigned char>(w[0]);
        Word rest = w.substr(1);
        // Theta(g * rest) = Theta(g) * rest + g * Theta(rest)
        Tensor2 tg;
        for (const auto& [p, q, c] : gen_values[g]) t2_add(tg, p, q, c);
        SparseVec rv = A.coords(NCPoly::word(rest));
        for (const auto& [j, cj] : rv) {
            Tensor2 part = t2_right(A, tg, j);
            for (const auto& [pq, c] : part) t2_add(out, pq.first, pq.second, c * cj);
        }
        Tensor2 tr = val(rest);
        int gb = A.index_of_word(Word(1, static_cast<char>(g))); // basis index of the letter
        Tensor2 part = t2_left(A, gb, tr);
        for (const auto& [pq, c] : part) t2_add(out, pq.first, pq.second, c);
        return out;
    };
    for (int i = 0; i < A.dim(); ++i) {
        Tensor2 t = val(A.basis_words[i]);
        for (const auto& [pq, c] : t) th.values[i].emplace_back(pq.first, pq.second, c);
    }
    return th;
}

DoubleDerivationReport check_double_derivation(const FinDimAlgebra& A,
                                               const DoubleDerivation& th) {
    DoubleDerivationReport rep;
    int n = A.dim();
    for (int i = 0; i < n && rep.leibniz_ok; ++i)
        for (int j = 0; j < n && rep.leibniz_ok; ++j) {
            if (A.truncated && A.graded && A.weights[i] + A.weights[j] > A.cap)
                continue; // product truncates; Leibniz not meaningful here
            Tensor2 lhs = theta_of(th, A.mul(i, j));
            Tensor2 rhs;
            for (const auto& [p, q, c] : th.values[i]) {
                Tensor2 t{{{p, q}, c}};
                for (const auto& [pq, cc] : t2_right(A, t, j)) t2_add(rhs, pq.first, pq.second, cc);
            }
            for (const auto& [p, q, c] : th.values[j]) {
                Tensor2 t{{{p, q}, c}};
                for (const auto& [pq, cc] : t2_left(A, i, t)) t2_add(rhs, pq.first, pq.second, cc);
            }
            if (lhs != rhs) {
                rep.leibniz_ok = false;
                rep.witness = A.names[i] + " * " + A.names[j];
            }
        }
    // (Id + Theta_t) multiplicative on A_t/(A_t+)^2: the pair (a, Theta(a))
    // with product (a,P)(b,Q) = (ab, P.b + a.Q). Same bilinear content as the
    // Leibniz rule; checked independently as stated.
    for (int i = 0; i < n && rep.automorphism_ok; ++i)
        for (int j = 0; j < n && rep.automorphism_ok; ++j) {
            if (A.truncated && A.graded && A.weights[i] + A.weights[j] > A.cap) continue;
            Tensor2 ti = theta_of(th, sv_unit(i));
            Tensor2 tj = theta_of(th, sv_unit(j));
            Tensor2 prod = t2_right(A, ti, j);
            for (const auto& [pq, c] : t2_left(A, i, tj)) t2_add(prod, pq.first, pq.second, c);
            if (prod != theta_of(th, A.mul(i, j))) {
                rep.automorphism_ok = false;
                rep.witness = A.names[i] + " * " + A.names[j];
            }
        }
    return rep;
}

} // namespace ncdr
