#pragma once

#include <vector>

namespace causalkin::linalg {

// In-place Cholesky factorization of a symmetric positive-definite matrix
// (row-major, lower triangle written). Returns false when a pivot falls at or
// below tol, i.e. the matrix is numerically rank-deficient.
bool cholesky(std::vector<double>& a, int n, double tol = 1e-12);

// Inverse of an SPD matrix via Cholesky. Returns false on rank deficiency,
// leaving `a` unspecified. The result is symmetrized so downstream code can
// rely on exact (i,j)/(j,i) equality.
bool spd_inverse(std::vector<double>& a, int n, double tol = 1e-12);

}  // namespace causalkin::linalg
