// Timing comparison of the serial reference kernels against the OpenMP
// variants, plus one end-to-end directional-KL pair sweep. Run manually:
//   ./causalkin_bench [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "causalkin/ingest.hpp"
#include "causalkin/kernels.hpp"
#include "causalkin/kl.hpp"
#include "causalkin/rng.hpp"
#include "causalkin/synth.hpp"

using namespace causalkin;

namespace {

double time_ms(const std::function<void()>& fn, int repeats) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < repeats; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / repeats;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %9.3f ms   omp %9.3f ms   speedup %.2fx\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 5;
#ifdef _OPENMP
    std::printf("openmp enabled, max threads %d, repeats %d\n", omp_get_max_threads(),
                repeats);
#else
    std::printf("openmp NOT enabled; both columns run the same code\n");
#endif

    Rng rng(7);

    {  // dense matmul, GCN-shaped: (batch*n x f) * (f x h)
        const int m = 4096, k = 64, n = 64;
        std::vector<double> a(static_cast<std::size_t>(m) * k), b(static_cast<std::size_t>(k) * n),
            c(static_cast<std::size_t>(m) * n);
        for (auto& v : a) v = rng.normal();
        for (auto& v : b) v = rng.normal();
        const double s = time_ms([&] { kernels::matmul_serial(a.data(), b.data(), c.data(), m, k, n); }, repeats);
        const double p = time_ms([&] { kernels::matmul(a.data(), b.data(), c.data(), m, k, n); }, repeats);
        report("matmul 4096x64x64", s, p);
    }

    {  // correlation matrix at the 22-joint/3-dim scale
        const int vars = 66, frames = 30000;
        std::vector<double> z(static_cast<std::size_t>(vars) * frames),
            corr(static_cast<std::size_t>(vars) * vars);
        for (auto& v : z) v = rng.normal();
        const double s = time_ms([&] { kernels::correlation_serial(z.data(), vars, frames, corr.data()); }, repeats);
        const double p = time_ms([&] { kernels::correlation(z.data(), vars, frames, corr.data()); }, repeats);
        report("correlation 66x30000", s, p);
    }

    {  // per-pair directional KL sweep over every joint pair
        const Dataset d = sample_scm(skeletal22_scm(Mechanism::nonlinear_asymmetric, 0.3),
                                     20000, 11);
        const DiscreteDataset dd = discretize(d, 8);
        const int n = d.n_joints;
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
        std::vector<double> out(pairs.size());
        auto sweep_serial = [&] {
            for (std::size_t p = 0; p < pairs.size(); ++p)
                out[p] = directional_kl(pairs[p].first, pairs[p].second, dd, 0.5);
        };
        auto sweep_parallel = [&] {
            kernels::parallel_for(static_cast<int>(pairs.size()), [&](int p) {
                out[p] = directional_kl(pairs[p].first, pairs[p].second, dd, 0.5);
            });
        };
        const double s = time_ms(sweep_serial, repeats);
        const double p = time_ms(sweep_parallel, repeats);
        report("directional-KL 231 pairs", s, p);
    }

    return 0;
}
