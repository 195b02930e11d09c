#include "ncdr/linalg.hpp"

#include <cassert>

namespace ncdr {

Mat operator*(const Mat& x, const Mat& y) {
    assert(x.cols == y.rows);
    Mat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            if (is_zero(x.a[i][k])) continue;
            for (int j = 0; j < y.cols; ++j)
                if (!is_zero(y.a[k][j])) r.a[i][j] += x.a[i][k] * y.a[k][j];
        }
    return r;
}

Mat operator-(const Mat& x, const Mat& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    Mat r = x;
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.a[i][j] -= y.a[i][j];
    return r;
}

Mat operator+(const Mat& x, const Mat& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    Mat r = x;
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.a[i][j] += y.a[i][j];
    return r;
}

RatVec Mat::apply(const RatVec& v) const {
    assert(static_cast<int>(v.size()) == cols);
    RatVec r(rows, Rat(0));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (!is_zero(a[i][j]) && !is_zero(v[j])) r[i] += a[i][j] * v[j];
    return r;
}

Mat Mat::transpose() const {
    Mat r(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r.a[j][i] = a[i][j];
    return r;
}

Rref rref(Mat m) {
    Rref out;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int piv = -1;
        for (int i = r; i < m.rows; ++i)
            if (!is_zero(m.a[i][c])) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m.a[r], m.a[piv]);
        Rat inv = 1 / m.a[r][c];
        for (int j = c; j < m.cols; ++j) m.a[r][j] *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || is_zero(m.a[i][c])) continue;
            Rat f = m.a[i][c];
            for (int j = c; j < m.cols; ++j) m.a[i][j] -= f * m.a[r][j];
        }
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.rank = r;
    out.m = std::move(m);
    return out;
}

int rank(const Mat& m) { return rref(m).rank; }

std::vector<RatVec> kernel_basis(const Mat& m) {
    Rref rr = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : rr.pivot_cols) is_pivot[c] = true;
    std::vector<RatVec> basis;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        RatVec v(m.cols, Rat(0));
        v[free] = 1;
        for (std::size_t p = 0; p < rr.pivot_cols.size(); ++p)
            v[rr.pivot_cols[p]] = -rr.m.a[p][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<int> column_space_pivots(const Mat& m) { return rref(m).pivot_cols; }

std::optional<RatVec> solve(const Mat& m, const RatVec& b) {
    Mat aug(m.rows, m.cols + 1);
    for (int i = 0; i < m.rows; ++i) {
        aug.a[i] = m.a[i];
        aug.a[i].push_back(b[i]);
    }
    Rref rr = rref(std::move(aug));
    RatVec x(m.cols, Rat(0));
    for (std::size_t p = 0; p < rr.pivot_cols.size(); ++p) {
        int c = rr.pivot_cols[p];
        if (c == m.cols) return std::nullopt; // pivot in the augmented column
        x[c] = rr.m.a[p][m.cols];
    }
    return x;
}

std::optional<Mat> solve_many(const Mat& m, const Mat& rhs) {
    assert(m.rows == rhs.rows);
    Mat aug(m.rows, m.cols + rhs.cols);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) aug.a[i][j] = m.a[i][j];
        for (int j = 0; j < rhs.cols; ++j) aug.a[i][m.cols + j] = rhs.a[i][j];
    }
    Rref rr = rref(std::move(aug));
    Mat x(m.cols, rhs.cols);
    for (std::size_t p = 0; p < rr.pivot_cols.size(); ++p) {
        int c = rr.pivot_cols[p];
        if (c >= m.cols) return std::nullopt; // inconsistent column
        for (int j = 0; j < rhs.cols; ++j) x.a[c][j] = rr.m.a[p][m.cols + j];
    }
    return x;
}

std::optional<Mat> inverse(const Mat& m) {
    if (m.rows != m.cols) return std::nullopt;
    auto x = solve_many(m, Mat::identity(m.rows));
    if (x && !((m * *x) == Mat::identity(m.rows))) return std::nullopt; // rank deficit
    return x;
}

Mat from_columns(const std::vector<RatVec>& cols, int dim) {
    Mat m(dim, static_cast<int>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < dim; ++i) m.a[i][j] = cols[j][i];
    return m;
}

} // namespace ncdr
