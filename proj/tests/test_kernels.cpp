#include <doctest.h>

#include <vector>

#include "causalkin/kernels.hpp"
#include "causalkin/rng.hpp"

using namespace causalkin;

namespace {

std::vector<double> random_matrix(Rng& rng, int rows, int cols) {
    std::vector<double> m(static_cast<std::size_t>(rows) * cols);
    for (auto& v : m) v = rng.normal();
    return m;
}

// independent reference: plain i-j-l triple loop
std::vector<double> naive_matmul(const std::vector<double>& a, const std::vector<double>& b,
                                 int m, int k, int n) {
    std::vector<double> c(static_cast<std::size_t>(m) * n, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int l = 0; l < k; ++l) acc += a[i * k + l] * b[l * n + j];
            c[i * n + j] = acc;
        }
    return c;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("matmul agrees with the naive oracle") {
    Rng rng(1);
    const int m = 17, k = 9, n = 13;
    const auto a = random_matrix(rng, m, k);
    const auto b = random_matrix(rng, k, n);
    std::vector<double> c(static_cast<std::size_t>(m) * n);
    kernels::matmul(a.data(), b.data(), c.data(), m, k, n);
    const auto expected = naive_matmul(a, b, m, k, n);
    for (std::size_t i = 0; i < c.size(); ++i)
        CHECK(c[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("parallel kernels are bitwise identical to the serial references") {
    Rng rng(2);
    const int m = 41, k = 23, n = 19, batch = 11;

    const auto a = random_matrix(rng, m, k);
    const auto b = random_matrix(rng, k, n);
    std::vector<double> serial(static_cast<std::size_t>(m) * n), parallel(serial.size());
    kernels::matmul_serial(a.data(), b.data(), serial.data(), m, k, n);
    kernels::matmul(a.data(), b.data(), parallel.data(), m, k, n);
    CHECK(serial == parallel);

    const auto at = random_matrix(rng, k, m);
    kernels::matmul_at_b_serial(at.data(), b.data(), serial.data(), k, m, n);
    kernels::matmul_at_b(at.data(), b.data(), parallel.data(), k, m, n);
    CHECK(serial == parallel);

    const auto bt = random_matrix(rng, n, k);
    kernels::matmul_a_bt_serial(a.data(), bt.data(), serial.data(), m, k, n);
    kernels::matmul_a_bt(a.data(), bt.data(), parallel.data(), m, k, n);
    CHECK(serial == parallel);

    const int nodes = 7, f = 5;
    const auto adj = random_matrix(rng, nodes, nodes);
    const auto x = random_matrix(rng, batch * nodes, f);
    std::vector<double> s2(x.size()), p2(x.size());
    kernels::batched_adj_apply_serial(adj.data(), x.data(), s2.data(), batch, nodes, f);
    kernels::batched_adj_apply(adj.data(), x.data(), p2.data(), batch, nodes, f);
    CHECK(s2 == p2);

    const int vars = 12, frames = 301;
    const auto z = random_matrix(rng, vars, frames);
    std::vector<double> c1(static_cast<std::size_t>(vars) * vars), c2(c1.size());
    kernels::correlation_serial(z.data(), vars, frames, c1.data());
    kernels::correlation(z.data(), vars, frames, c2.data());
    CHECK(c1 == c2);
}

TEST_CASE("matmul_at_b transposes the first operand") {
    // a is k x m; c = a^T b
    const std::vector<double> a{1, 2, 3, 4};   // 2x2: [[1,2],[3,4]]
    const std::vector<double> b{5, 6, 7, 8};   // 2x2
    std::vector<double> c(4);
    kernels::matmul_at_b(a.data(), b.data(), c.data(), 2, 2, 2);
    // a^T = [[1,3],[2,4]]; a^T b = [[26,30],[38,44]]
    CHECK(c == std::vector<double>{26, 30, 38, 44});
}

TEST_CASE("correlation of identical z-columns is ss/(n-1)") {
    const int frames = 5;
    std::vector<double> z(2 * frames);
    for (int t = 0; t < frames; ++t) z[t] = z[frames + t] = t + 1.0;
    std::vector<double> corr(4);
    kernels::correlation(z.data(), 2, frames, corr.data());
    const double expected = (1.0 + 4 + 9 + 16 + 25) / 4.0;
    CHECK(corr[0] == doctest::Approx(expected));
    CHECK(corr[1] == corr[0]);
    CHECK(corr[2] == corr[3]);
}

TEST_CASE("parallel_for covers every index exactly once") {
    std::vector<int> hits(1000, 0);
    kernels::parallel_for(1000, [&](int i) { hits[i] += 1; });
    for (const int h : hits) CHECK(h == 1);
}

}  // TEST_SUITE
