#pragma once

#include "ncdr/forms.hpp"

#include <cstdint>
#include <map>

namespace ncdr {

// Pointwise operator-identity sweep over every form basis element of degree
// <= n_max. All identities are exact rational equalities; the first failure
// aborts the sweep and is reported with a witness.
struct IdentitySweepResult {
    bool ok = true;
    std::int64_t checked = 0; // basis elements visited
    std::map<std::string, std::int64_t> per_identity;
    std::string witness; // "<identity> on <element>" for the first failure

    std::int64_t total_checks() const {
        std::int64_t t = 0;
        for (const auto& [k, v] : per_identity) t += v;
        return t;
    }
};

// Identities checked on each basis element w of degree n:
//   d2      : d(d w) = 0
//   b2      : b(b w) = 0
//   bd_db   : (b d + d b)(w) = w - kappa(w)
//   kn_id   : kappa^n(w) - w = b(kappa^n(d w))            (n >= 1)
//   knd     : kappa^{n+1}(d w) = d w
//   iota_eq : kappa-power-sum formula = commutator-sum formula for iota
//   iota_d  : (iota d + d iota)(w) = 0
//   iota2   : iota(iota w) = 0                            (n >= 2)
//   k_iota  : kappa(iota w) = iota w                      (n >= 1)
//   B2      : B(B w) = 0
//   Bb_bB   : (B b + b B)(w) = 0                          (n >= 1)
IdentitySweepResult sweep_form_identities(const FinDimAlgebra& A, int n_max);

// Enumerates all FormKeys of the given degree (a0 arbitrary, tail entries
// nonunit) and invokes fn on each; returns false if fn returned false.
bool for_each_form_key(const FinDimAlgebra& A, int degree,
                       const std::function<bool(const FormKey&)>& fn);

} // namespace ncdr
