#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "tlfree/rational.hpp"

namespace tlfree {

template <class F>
using Matrix = std::vector<std::vector<F>>;

template <class F>
struct LinearSolveResult {
    bool consistent = false;
    bool unique = false;
    int rank = 0;
    std::vector<F> solution;  // a particular solution when consistent
};

// Row-reduce [A | b] over an exact field.  F needs +,-,*,/ and ==F() zero test.
template <class F>
LinearSolveResult<F> solve_linear(Matrix<F> A, std::vector<F> b) {
    const size_t rows = A.size();
    const size_t cols = rows ? A[0].size() : 0;
    if (b.size() != rows) throw domain_error("solve_linear: shape mismatch");
    std::vector<int> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && A[p][c] == F()) ++p;
        if (p == rows) continue;
        std::swap(A[p], A[r]);
        std::swap(b[p], b[r]);
        F inv = A[r][c];
        for (size_t j = c; j < cols; ++j) A[r][j] = A[r][j] / inv;
        b[r] = b[r] / inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c] == F()) continue;
            F f = A[i][c];
            for (size_t j = c; j < cols; ++j) A[i][j] = A[i][j] - f * A[r][j];
            b[i] = b[i] - f * b[r];
        }
        pivot_col.push_back(int(c));
        ++r;
    }
    LinearSolveResult<F> res;
    res.rank = int(r);
    for (size_t i = r; i < rows; ++i)
        if (!(b[i] == F())) return res;  // inconsistent
    res.consistent = true;
    res.unique = (r == cols);
    res.solution.assign(cols, F());
    for (size_t i = 0; i < pivot_col.size(); ++i) res.solution[pivot_col[i]] = b[i];
    return res;
}

// Exact PSD test for a symmetric rational matrix via pivoted Schur
// complements: a zero pivot forces its whole row to vanish.
inline bool psd_rational(Matrix<Rational> M) {
    size_t n = M.size();
    for (auto& row : M)
        if (row.size() != n) throw domain_error("psd_rational: not square");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (M[i][j] != M[j][i]) throw domain_error("psd_rational: not symmetric");
    for (size_t k = 0; k < n; ++k) {
        Rational d = M[k][k];
        if (d < 0) return false;
        if (d == 0) {
            for (size_t j = k + 1; j < n; ++j)
                if (M[k][j] != 0) return false;
            continue;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) M[i][j] -= M[i][k] * M[k][j] / d;
    }
    return true;
}

// Jacobi eigenvalue sweep; smallest eigenvalue must clear -tol.
inline bool psd_double(Matrix<double> M, double tol = 1e-9) {
    size_t n = M.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) off += M[i][j] * M[i][j];
        if (off < 1e-24) break;
        for (size_t p = 0; p < n; ++p)
            for (size_t q = p + 1; q < n; ++q) {
                if (std::abs(M[p][q]) < 1e-18) continue;
                double theta = (M[q][q] - M[p][p]) / (2 * M[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (size_t i = 0; i < n; ++i) {
                    double mip = M[i][p], miq = M[i][q];
                    M[i][p] = c * mip - s * miq;
                    M[i][q] = s * mip + c * miq;
                }
                for (size_t i = 0; i < n; ++i) {
                    double mpi = M[p][i], mqi = M[q][i];
                    M[p][i] = c * mpi - s * mqi;
                    M[q][i] = s * mpi + c * mqi;
                }
            }
    }
    for (size_t i = 0; i < n; ++i)
        if (M[i][i] < -tol) return false;
    return true;
}

}  // namespace tlfree
