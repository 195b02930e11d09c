#pragma once

#include "ncdr/algebra.hpp"

#include <functional>
#include <map>
#include <string>

namespace ncdr {

// Basis element of the n-form space A (x) (A/k1)^(x)n, encoded as bytes
// [a0, t1, ..., tn] with a0 any basis index and ti >= 1 (never the unit).
using FormKey = std::string;

inline int form_degree(const FormKey& k) { return static_cast<int>(k.size()) - 1; }

struct Form {
    int degree = 0;
    std::map<FormKey, Rat> terms;

    Form() = default;
    explicit Form(int deg) : degree(deg) {}
    static Form basis(const FormKey& k, const Rat& c = 1) {
        Form f(form_degree(k));
        if (!is_zero(c)) f.terms[k] = c;
        return f;
    }
    bool zero() const { return terms.empty(); }
    void add(const FormKey& k, const Rat& c) {
        if (is_zero(c)) return;
        auto it = terms.find(k);
        if (it == terms.end()) terms.emplace(k, c);
        else {
            it->second += c;
            if (is_zero(it->second)) terms.erase(it);
        }
    }
    Form& operator+=(const Form& o) {
        for (const auto& [k, c] : o.terms) add(k, c);
        return *this;
    }
    Form& operator-=(const Form& o) {
        for (const auto& [k, c] : o.terms) add(k, -c);
        return *this;
    }
    Form& operator*=(const Rat& c) {
        if (is_zero(c)) terms.clear();
        else
            for (auto& [k, v] : terms) v *= c;
        return *this;
    }
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(Form a, const Rat& c) { return a *= c; }
    bool operator==(const Form& o) const { return terms == o.terms; }
};

// Double derivation A -> A (x) A for the outer bimodule structure; values
// stored per basis index as (left, right, coeff) triples.
struct DoubleDerivation {
    std::vector<std::vector<std::tuple<int, int, Rat>>> values;
    bool verified = false;

    static DoubleDerivation distinguished(const FinDimAlgebra& A); // a -> 1(x)a - a(x)1
    static DoubleDerivation zero(const FinDimAlgebra& A);
    // Leibniz extension from values on generators (word-backed algebras).
    static DoubleDerivation from_generators(
        const FinDimAlgebra& A, const std::vector<std::vector<std::tuple<int, int, Rat>>>& gen_values);
};

struct DoubleDerivationReport {
    bool leibniz_ok = true;
    bool automorphism_ok = true;
    std::string witness;
    bool pass() const { return leibniz_ok && automorphism_ok; }
};

DoubleDerivationReport check_double_derivation(const FinDimAlgebra& A, const DoubleDerivation& th);

// Operator zoo on forms over a fixed algebra. Pure; members const.
class FormOps {
public:
    explicit FormOps(const FinDimAlgebra& A) : A_(A) {}
    const FinDimAlgebra& algebra() const { return A_; }

    // (a0 da1...dan) * e_j, rewritten into the left-module basis via
    // (da)b = d(ab) - a db, applied eagerly left to right.
    Form right_mul(const Form& w, int j) const;
    Form right_mul(const Form& w, const SparseVec& a) const;
    Form left_mul(const SparseVec& a, const Form& w) const;
    Form mul(const Form& u, const Form& v) const;

    Form d(const Form& w) const;
    Form b(const Form& w) const;
    Form kappa(const Form& w) const;
    Form kappa_pow(const Form& w, int i) const;
    Form connes_B(const Form& w) const;        // sum_{i<=n} kappa^i d
    Form iota_delta_sum(const Form& w) const;  // (1+kappa+...+kappa^{n-1}) b
    Form iota_delta_direct(const Form& w) const; // commutator-sum formula
    // Both formulas, asserted equal; throws on mismatch (internal bug).
    Form iota_delta(const Form& w) const;

    Form iota_theta(const Form& w, const DoubleDerivation& th) const;
    Form lie_theta(const Form& w, const DoubleDerivation& th) const;

    // Degree-0 reduction: kill the unit coefficient (for reduced forms).
    Form drop_unit(const Form& w) const;

    std::string form_str(const Form& w) const;

private:
    const FinDimAlgebra& A_;
    Form right_mul_key(const FormKey& k, int j) const;
};

struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ncdr
