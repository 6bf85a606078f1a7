#pragma once

#include <cstddef>

namespace causalkin::kernels {

// Dense row-major kernels. Every kernel has a *_serial reference used by the
// unit tests and the benchmark target. The OpenMP variants split work only
// across independent output elements (rows or matrix entries); no reduction
// is ever shared between threads, so parallel results are bitwise identical
// to the serial reference at any thread count.

// c[m x n] = a[m x k] * b[k x n]
void matmul_serial(const double* a, const double* b, double* c, int m, int k, int n);
void matmul(const double* a, const double* b, double* c, int m, int k, int n);

// c[m x n] = a^T * b, a is [k x m], b is [k x n]
void matmul_at_b_serial(const double* a, const double* b, double* c, int k, int m, int n);
void matmul_at_b(const double* a, const double* b, double* c, int k, int m, int n);

// c[m x n] = a * b^T, a is [m x k], b is [n x k]
void matmul_a_bt_serial(const double* a, const double* b, double* c, int m, int k, int n);
void matmul_a_bt(const double* a, const double* b, double* c, int m, int k, int n);

// out[b] = adj * x[b] for every sample: adj is [n x n], x is batch x (n*f)
void batched_adj_apply_serial(const double* adj, const double* x, double* out,
                              int batch, int n, int f);
void batched_adj_apply(const double* adj, const double* x, double* out,
                       int batch, int n, int f);

// corr[v x v] from z-scored columns stored variable-major: z[v * frames]
// entry (i,j) = dot(z_i, z_j) / (frames - 1)
void correlation_serial(const double* z, int n_vars, int n_frames, double* corr);
void correlation(const double* z, int n_vars, int n_frames, double* corr);

// Index-parallel helper for coarse-grained independent work items.
// fn must not throw across the loop boundary.
template <class F>
void parallel_for(int n, F&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) fn(i);
#else
    for (int i = 0; i < n; ++i) fn(i);
#endif
}

}  // namespace causalkin::kernels
