#include "causalkin/citest.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "causalkin/errors.hpp"
#include "causalkin/kernels.hpp"
#include "causalkin/linalg.hpp"

namespace causalkin {

std::vector<double> standardized_columns(const Dataset& d) {
    const int n = d.frames();
    const int vars = d.vars();
    std::vector<double> z(static_cast<std::size_t>(vars) * n);
    kernels::parallel_for(vars, [&](int v) {
        double mean = 0.0;
        for (int t = 0; t < n; ++t) mean += d.at(t, v);
        mean /= n;
        double ss = 0.0;
        for (int t = 0; t < n; ++t) {
            const double c = d.at(t, v) - mean;
            ss += c * c;
        }
        const double sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
        double* zv = z.data() + static_cast<std::size_t>(v) * n;
        if (sd > 0.0)
            for (int t = 0; t < n; ++t) zv[t] = (d.at(t, v) - mean) / sd;
        else
            for (int t = 0; t < n; ++t) zv[t] = 0.0;
    });
    return z;
}

std::vector<double> correlation_matrix(const Dataset& d) {
    const auto z = standardized_columns(d);
    std::vector<double> corr(static_cast<std::size_t>(d.vars()) * d.vars());
    kernels::correlation(z.data(), d.vars(), d.frames(), corr.data());
    return corr;
}

namespace {

double partial_corr_from_submatrix(std::vector<double>& sub, int m) {
    if (!linalg::spd_inverse(sub, m)) throw SingularConditioningError();
    const double pxx = sub[0];
    const double pyy = sub[static_cast<std::size_t>(1) * m + 1];
    const double pxy = sub[1];
    const double denom = std::sqrt(pxx * pyy);
    if (!(denom > 0.0) || !std::isfinite(denom)) throw SingularConditioningError();
    return -pxy / denom;
}

void canonicalize(int& x, int& y, std::vector<int>& s) {
    if (x > y) std::swap(x, y);
    std::sort(s.begin(), s.end());
    if (x == y) throw ConfigError("partial correlation needs distinct variables");
    for (int v : s)
        if (v == x || v == y) throw ConfigError("conditioning set contains x or y");
}

}  // namespace

double partial_correlation(int x, int y, std::vector<int> s, const Dataset& d) {
    canonicalize(x, y, s);
    const int n = d.frames();
    if (static_cast<int>(s.size()) > n - 4)
        throw InsufficientSamplesError("conditioning set larger than frames - 4");

    const int m = 2 + static_cast<int>(s.size());
    std::vector<int> vars{x, y};
    vars.insert(vars.end(), s.begin(), s.end());

    // z-score just the needed columns with the shared standardization path
    std::vector<std::vector<double>> z(m);
    for (int i = 0; i < m; ++i) {
        const int v = vars[i];
        double mean = 0.0;
        for (int t = 0; t < n; ++t) mean += d.at(t, v);
        mean /= n;
        double ss = 0.0;
        for (int t = 0; t < n; ++t) {
            const double c = d.at(t, v) - mean;
            ss += c * c;
        }
        const double sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
        z[i].resize(n);
        if (sd > 0.0)
            for (int t = 0; t < n; ++t) z[i][t] = (d.at(t, v) - mean) / sd;
    }

    std::vector<double> sub(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            double acc = 0.0;
            for (int t = 0; t < n; ++t) acc += z[i][t] * z[j][t];
            const double r = acc / (n - 1);
            sub[static_cast<std::size_t>(i) * m + j] = r;
            sub[static_cast<std::size_t>(j) * m + i] = r;
        }
    if (s.empty()) return sub[1];  // plain correlation, no inversion involved
    return partial_corr_from_submatrix(sub, m);
}

double partial_correlation_from_corr(int x, int y, std::vector<int> s,
                                     const std::vector<double>& corr, int n_vars) {
    canonicalize(x, y, s);
    if (s.empty()) return corr[static_cast<std::size_t>(x) * n_vars + y];
    const int m = 2 + static_cast<int>(s.size());
    std::vector<int> vars{x, y};
    vars.insert(vars.end(), s.begin(), s.end());
    std::vector<double> sub(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            sub[static_cast<std::size_t>(i) * m + j] =
                corr[static_cast<std::size_t>(vars[i]) * n_vars + vars[j]];
    return partial_corr_from_submatrix(sub, m);
}

CiDecision fisher_z_test(double r, int n, int k, double alpha) {
    if (n - k - 3 < 1)
        throw InsufficientSamplesError("fisher z needs n - k - 3 >= 1");
    if (!(std::abs(r) < 1.0))
        throw ConfigError("fisher z requires |r| < 1");
    const double z = 0.5 * std::log((1.0 + r) / (1.0 - r));
    CiDecision out;
    out.statistic = std::sqrt(static_cast<double>(n - k - 3)) * std::abs(z);
    out.p_value = std::erfc(out.statistic / std::sqrt(2.0));
    out.independent = out.p_value > alpha;
    return out;
}

double conditional_mutual_information(int x, int y, const std::vector<int>& s,
                                      const DiscreteDataset& d) {
    const int n = d.frames();
    const int nx = d.n_states[x];
    const int ny = d.n_states[y];
    long long n_cells = 1;
    for (int v : s) n_cells *= d.n_states[v];

    // counts: cell-major contingency n(s, x, y) plus the two margins per cell
    std::vector<double> joint(static_cast<std::size_t>(n_cells) * nx * ny, 0.0);
    for (int t = 0; t < n; ++t) {
        long long cell = 0;
        for (int v : s) cell = cell * d.n_states[v] + d.at(t, v);
        joint[(static_cast<std::size_t>(cell) * nx + d.at(t, x)) * ny + d.at(t, y)] += 1.0;
    }

    double mi = 0.0;
    std::vector<double> mx(nx), my(ny);
    for (long long cell = 0; cell < n_cells; ++cell) {
        const double* block = joint.data() + static_cast<std::size_t>(cell) * nx * ny;
        double n_s = 0.0;
        std::fill(mx.begin(), mx.end(), 0.0);
        std::fill(my.begin(), my.end(), 0.0);
        for (int a = 0; a < nx; ++a)
            for (int b = 0; b < ny; ++b) {
                const double c = block[a * ny + b];
                n_s += c;
                mx[a] += c;
                my[b] += c;
            }
        if (n_s == 0.0) continue;  // empty cells contribute nothing
        for (int a = 0; a < nx; ++a)
            for (int b = 0; b < ny; ++b) {
                const double c = block[a * ny + b];
                if (c == 0.0) continue;
                mi += (c / n) * std::log(c * n_s / (mx[a] * my[b]));
            }
    }
    return mi;
}

CiDecision conditional_mi_test(int x, int y, const std::vector<int>& s,
                               const DiscreteDataset& d, double alpha) {
    const int n = d.frames();
    long long dof = static_cast<long long>(d.n_states[x] - 1) * (d.n_states[y] - 1);
    for (int v : s) dof *= d.n_states[v];

    CiDecision out;
    if (dof <= 0) {  // a degenerate variable carries no information
        out.independent = true;
        out.p_value = 1.0;
        return out;
    }
    out.statistic = 2.0 * n * conditional_mutual_information(x, y, s, d);
    out.p_value = boost::math::gamma_q(dof / 2.0, std::max(out.statistic, 0.0) / 2.0);
    if (n < 5 * dof) {
        out.low_power = true;
        out.independent = true;
        return out;
    }
    out.independent = out.p_value > alpha;
    return out;
}

}  // namespace causalkin
