#ifndef XMUDA_NUMERIC_HPP
#define XMUDA_NUMERIC_HPP

#include <cmath>
#include <cstddef>
#include <vector>

namespace xmuda {

// C(m,n) += A(m,k) * B(k,n), row-major. Fixed loop order keeps results
// bit-reproducible across runs; the k-innermost form vectorizes well.
inline void gemm_acc(const double* A, const double* B, double* C, int m, int k,
                     int n) {
    for (int i = 0; i < m; ++i) {
        const double* a = A + std::size_t(i) * k;
        double* c = C + std::size_t(i) * n;
        for (int p = 0; p < k; ++p) {
            const double av = a[p];
            if (av == 0.0) continue;
            const double* b = B + std::size_t(p) * n;
            for (int j = 0; j < n; ++j) c[j] += av * b[j];
        }
    }
}

// C(m,n) += A(k,m)^T * B(k,n)
inline void gemm_at_b_acc(const double* A, const double* B, double* C, int m,
                          int k, int n) {
    for (int p = 0; p < k; ++p) {
        const double* a = A + std::size_t(p) * m;
        const double* b = B + std::size_t(p) * n;
        for (int i = 0; i < m; ++i) {
            const double av = a[i];
            if (av == 0.0) continue;
            double* c = C + std::size_t(i) * n;
            for (int j = 0; j < n; ++j) c[j] += av * b[j];
        }
    }
}

// C(m,n) += A(m,k) * B(n,k)^T
inline void gemm_a_bt_acc(const double* A, const double* B, double* C, int m,
                          int k, int n) {
    for (int i = 0; i < m; ++i) {
        const double* a = A + std::size_t(i) * k;
        double* c = C + std::size_t(i) * n;
        for (int j = 0; j < n; ++j) {
            const double* b = B + std::size_t(j) * k;
            double s = 0.0;
            for (int p = 0; p < k; ++p) s += a[p] * b[p];
            c[j] += s;
        }
    }
}

// Cyclic Jacobi eigendecomposition of a symmetric n x n matrix (row-major).
// Returns eigenvalues ascending with matching eigenvectors as columns of V
// (A = V diag(w) V^T). Deterministic sweep order.
inline void jacobi_eigh(std::vector<double> A, int n, std::vector<double>& w,
                        std::vector<double>& V) {
    V.assign(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) V[std::size_t(i) * n + i] = 1.0;
    auto a = [&](int i, int j) -> double& { return A[std::size_t(i) * n + j]; };
    auto v = [&](int i, int j) -> double& { return V[std::size_t(i) * n + j]; };

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    w.resize(std::size_t(n));
    for (int i = 0; i < n; ++i) w[std::size_t(i)] = a(i, i);
    // Selection-sort ascending, swapping eigenvector columns alongside.
    for (int i = 0; i < n; ++i) {
        int best = i;
        for (int j = i + 1; j < n; ++j)
            if (w[std::size_t(j)] < w[std::size_t(best)]) best = j;
        if (best != i) {
            std::swap(w[std::size_t(i)], w[std::size_t(best)]);
            for (int r = 0; r < n; ++r)
                std::swap(V[std::size_t(r) * n + i], V[std::size_t(r) * n + best]);
        }
    }
}

}  // namespace xmuda

#endif
