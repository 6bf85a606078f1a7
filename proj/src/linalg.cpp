#include "causalkin/linalg.hpp"

#include <cmath>

namespace causalkin::linalg {

bool cholesky(std::vector<double>& a, int n, double tol) {
    for (int j = 0; j < n; ++j) {
        double d = a[static_cast<std::size_t>(j) * n + j];
        for (int k = 0; k < j; ++k) {
            const double l = a[static_cast<std::size_t>(j) * n + k];
            d -= l * l;
        }
        if (!(d > tol)) return false;
        const double ljj = std::sqrt(d);
        a[static_cast<std::size_t>(j) * n + j] = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = a[static_cast<std::size_t>(i) * n + j];
            for (int k = 0; k < j; ++k)
                s -= a[static_cast<std::size_t>(i) * n + k] *
                     a[static_cast<std::size_t>(j) * n + k];
            a[static_cast<std::size_t>(i) * n + j] = s / ljj;
        }
    }
    return true;
}

bool spd_inverse(std::vector<double>& a, int n, double tol) {
    if (!cholesky(a, n, tol)) return false;

    // invert L in place (lower triangular)
    for (int j = 0; j < n; ++j) {
        a[static_cast<std::size_t>(j) * n + j] = 1.0 / a[static_cast<std::size_t>(j) * n + j];
        for (int i = j + 1; i < n; ++i) {
            double s = 0.0;
            for (int k = j; k < i; ++k)
                s += a[static_cast<std::size_t>(i) * n + k] *
                     a[static_cast<std::size_t>(k) * n + j];
            a[static_cast<std::size_t>(i) * n + j] =
                -s / a[static_cast<std::size_t>(i) * n + i];
        }
    }

    // A^-1 = L^-T L^-1, filled symmetrically
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = j; k < n; ++k)
                s += a[static_cast<std::size_t>(k) * n + i] *
                     a[static_cast<std::size_t>(k) * n + j];
            a[static_cast<std::size_t>(i) * n + j] = s;
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            a[static_cast<std::size_t>(i) * n + j] = a[static_cast<std::size_t>(j) * n + i];
    return true;
}

}  // namespace causalkin::linalg
