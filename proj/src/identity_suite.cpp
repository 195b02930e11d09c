#include "ncdr/identity_suite.hpp"

namespace ncdr {

bool for_each_form_key(const FinDimAlgebra& A, int degree,
                       const std::function<bool(const FormKey&)>& fn) {
    int dim = A.dim();
    if (degree > 0 && dim < 2) return true; // no nonunit tail entries exist
    FormKey k(degree + 1, '\0');
    for (int i = 1; i <= degree; ++i) k[i] = 1;
    while (true) {
        if (!fn(k)) return false;
        // odometer: a0 over [0,dim), tail entries over [1,dim)
        int pos = degree;
        while (pos >= 0) {
            int lo = pos == 0 ? 0 : 1;
            int v = static_cast<unsigned char>(k[pos]) + 1;
            if (v < dim) {
                k[pos] = static_cast<char>(v);
                break;
            }
            k[pos] = static_cast<char>(lo);
            --pos;
        }
        if (pos < 0) return true;
    }
}

IdentitySweepResult sweep_form_identities(const FinDimAlgebra& A, int n_max) {
    FormOps ops(A);
    IdentitySweepResult res;
    auto check = [&](const char* name, const Form& lhs, const Form& rhs,
                     const FormKey& at) {
        ++res.per_identity[name];
        if (lhs == rhs) return true;
        res.ok = false;
        res.witness = std::string(name) + " on " + ops.form_str(Form::basis(at));
        return false;
    };
    Form zero0(0);
    for (int n = 0; n <= n_max && res.ok; ++n) {
        for_each_form_key(A, n, [&](const FormKey& key) {
            ++res.checked;
            Form w = Form::basis(key);
            Form dw = ops.d(w);
            Form bw = ops.b(w);
            Form kw = ops.kappa(w);
            if (!check("d2", ops.d(dw), zero0, key)) return false;
            if (n >= 2 && !check("b2", ops.b(bw), zero0, key)) return false;
            if (!check("bd_db", ops.b(dw) + ops.d(bw), w - kw, key)) return false;
            Form knd = ops.kappa_pow(dw, n);
            if (n >= 1 && !check("kn_id", ops.kappa_pow(w, n) - w, ops.b(knd), key))
                return false;
            if (!check("knd", ops.kappa(knd), dw, key)) return false;
            Form is = ops.iota_delta_sum(w);
            if (!check("iota_eq", is, ops.iota_delta_direct(w), key)) return false;
            if (!check("iota_d", ops.iota_delta_sum(dw) + ops.d(is), zero0, key))
                return false;
            if (n >= 2 && !check("iota2", ops.iota_delta_sum(is), zero0, key))
                return false;
            if (n >= 1 && !check("k_iota", ops.kappa(is), is, key)) return false;
            Form Bw = ops.connes_B(w);
            if (!check("B2", ops.connes_B(Bw), zero0, key)) return false;
            if (n >= 1 && !check("Bb_bB", ops.connes_B(bw) + ops.b(Bw), zero0, key))
                return false;
            return true;
        });
    }
    return res;
}

} // namespace ncdr
