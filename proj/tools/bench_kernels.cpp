// Micro-benchmark of the inner-loop kernels across available backends.
// Prints per-kernel throughput; not registered as a test.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "bhwave/kernels.hpp"

using namespace bhwave;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1 << 16;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 2000;
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n), vp(n), w(n), src(n), vn(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = dist(rng);
        vp[i] = dist(rng);
        w[i] = 0.5 + 0.5 * dist(rng) * dist(rng);
        src[i] = dist(rng);
    }
    std::printf("n = %zu, reps = %d\n", n, reps);
    for (auto be : {kernels::Backend::scalar, kernels::Backend::avx2}) {
        if (!kernels::backend_available(be)) continue;
        const auto& K = kernels::ops(be);
        double sink = 0.0;

        auto t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r) {
            K.leapfrog_interior(vn.data(), v.data(), vp.data(), w.data(),
                                src.data(), 1.0, 1e-4, 2500.0, n);
            sink += vn[n / 2];
        }
        const double t_leap = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r) sink += K.dot(v.data(), w.data(), n);
        const double t_dot = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r) sink += K.scan(v.data(), n).max_abs;
        const double t_scan = seconds_since(t0);

        const double pts = static_cast<double>(n) * reps * 1e-9;
        std::printf("%-6s  leapfrog %7.2f Gpt/s   dot %7.2f Gpt/s   scan %7.2f Gpt/s"
                    "   (sink %.3e)\n",
                    K.name, pts / t_leap, pts / t_dot, pts / t_scan, sink);
    }
    return 0;
}
