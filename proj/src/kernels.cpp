#include "causalkin/kernels.hpp"

#include <cstring>

namespace causalkin::kernels {

namespace {

inline void matmul_row(const double* a, const double* b, double* c, int i, int k, int n) {
    double* ci = c + static_cast<std::size_t>(i) * n;
    std::memset(ci, 0, sizeof(double) * n);
    const double* ai = a + static_cast<std::size_t>(i) * k;
    for (int l = 0; l < k; ++l) {
        const double ail = ai[l];
        const double* bl = b + static_cast<std::size_t>(l) * n;
        for (int j = 0; j < n; ++j) ci[j] += ail * bl[j];
    }
}

// c(i,j) = sum_l a(l,i) * b(l,j); one full reduction per entry
inline double at_b_entry(const double* a, const double* b, int k, int m, int n, int i, int j) {
    double acc = 0.0;
    for (int l = 0; l < k; ++l)
        acc += a[static_cast<std::size_t>(l) * m + i] * b[static_cast<std::size_t>(l) * n + j];
    return acc;
}

inline double a_bt_entry(const double* a, const double* b, int k, int n, int i, int j) {
    const double* ai = a + static_cast<std::size_t>(i) * k;
    const double* bj = b + static_cast<std::size_t>(j) * k;
    (void)n;
    double acc = 0.0;
    for (int l = 0; l < k; ++l) acc += ai[l] * bj[l];
    return acc;
}

inline void adj_apply_sample(const double* adj, const double* x, double* out, int n, int f) {
    for (int i = 0; i < n; ++i) {
        double* oi = out + static_cast<std::size_t>(i) * f;
        std::memset(oi, 0, sizeof(double) * f);
        const double* ai = adj + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            const double w = ai[j];
            if (w == 0.0) continue;
            const double* xj = x + static_cast<std::size_t>(j) * f;
            for (int c = 0; c < f; ++c) oi[c] += w * xj[c];
        }
    }
}

inline double corr_entry(const double* z, int n_frames, int i, int j) {
    const double* zi = z + static_cast<std::size_t>(i) * n_frames;
    const double* zj = z + static_cast<std::size_t>(j) * n_frames;
    double acc = 0.0;
    for (int t = 0; t < n_frames; ++t) acc += zi[t] * zj[t];
    return acc / (n_frames - 1);
}

}  // namespace

void matmul_serial(const double* a, const double* b, double* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i) matmul_row(a, b, c, i, k, n);
}

void matmul(const double* a, const double* b, double* c, int m, int k, int n) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < m; ++i) matmul_row(a, b, c, i, k, n);
}

void matmul_at_b_serial(const double* a, const double* b, double* c, int k, int m, int n) {
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            c[static_cast<std::size_t>(i) * n + j] = at_b_entry(a, b, k, m, n, i, j);
}

void matmul_at_b(const double* a, const double* b, double* c, int k, int m, int n) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            c[static_cast<std::size_t>(i) * n + j] = at_b_entry(a, b, k, m, n, i, j);
}

void matmul_a_bt_serial(const double* a, const double* b, double* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            c[static_cast<std::size_t>(i) * n + j] = a_bt_entry(a, b, k, n, i, j);
}

void matmul_a_bt(const double* a, const double* b, double* c, int m, int k, int n) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            c[static_cast<std::size_t>(i) * n + j] = a_bt_entry(a, b, k, n, i, j);
}

void batched_adj_apply_serial(const double* adj, const double* x, double* out,
                              int batch, int n, int f) {
    const std::size_t stride = static_cast<std::size_t>(n) * f;
    for (int s = 0; s < batch; ++s)
        adj_apply_sample(adj, x + s * stride, out + s * stride, n, f);
}

void batched_adj_apply(const double* adj, const double* x, double* out,
                       int batch, int n, int f) {
    const std::size_t stride = static_cast<std::size_t>(n) * f;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int s = 0; s < batch; ++s)
        adj_apply_sample(adj, x + s * stride, out + s * stride, n, f);
}

void correlation_serial(const double* z, int n_vars, int n_frames, double* corr) {
    for (int i = 0; i < n_vars; ++i)
        for (int j = i; j < n_vars; ++j) {
            const double v = corr_entry(z, n_frames, i, j);
            corr[static_cast<std::size_t>(i) * n_vars + j] = v;
            corr[static_cast<std::size_t>(j) * n_vars + i] = v;
        }
}

void correlation(const double* z, int n_vars, int n_frames, double* corr) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < n_vars; ++i)
        for (int j = i; j < n_vars; ++j) {
            const double v = corr_entry(z, n_frames, i, j);
            corr[static_cast<std::size_t>(i) * n_vars + j] = v;
            corr[static_cast<std::size_t>(j) * n_vars + i] = v;
        }
}

}  // namespace causalkin::kernels
