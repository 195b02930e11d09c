#pragma once

#include "ncdr/rational.hpp"

#include <optional>
#include <vector>

namespace ncdr {

using RatVec = std::vector<Rat>;

// Dense exact-rational matrix. Elimination uses the first nonzero pivot in
// fixed row/column order, so results are deterministic across runs.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<RatVec> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(r, RatVec(c, Rat(0))) {}
    Rat& at(int i, int j) { return a[i][j]; }
    const Rat& at(int i, int j) const { return a[i][j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.a[i][i] = 1;
        return m;
    }
    friend Mat operator*(const Mat& x, const Mat& y);
    friend Mat operator-(const Mat& x, const Mat& y);
    friend Mat operator+(const Mat& x, const Mat& y);
    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    bool all_zero() const {
        for (const auto& row : a)
            for (const auto& v : row)
                if (!ncdr::is_zero(v)) return false;
        return true;
    }
    RatVec apply(const RatVec& v) const;
    Mat transpose() const;
};

struct Rref {
    Mat m;
    std::vector<int> pivot_cols;
    int rank = 0;
};

Rref rref(Mat m);
int rank(const Mat& m);

// Basis of the null space {x : m x = 0}, one RatVec of length cols per basis
// vector, deterministic (free columns in increasing order).
std::vector<RatVec> kernel_basis(const Mat& m);

// Basis of the column space given by pivot column indices into the original
// matrix (deterministic pivot order).
std::vector<int> column_space_pivots(const Mat& m);

// One solution of m x = b, if any.
std::optional<RatVec> solve(const Mat& m, const RatVec& b);

// X with m X = rhs, columnwise; nullopt if any column is unsolvable.
std::optional<Mat> solve_many(const Mat& m, const Mat& rhs);

// Inverse of a square matrix, nullopt if singular.
std::optional<Mat> inverse(const Mat& m);

// Matrix whose columns are the given vectors.
Mat from_columns(const std::vector<RatVec>& cols, int dim);

} // namespace ncdr
