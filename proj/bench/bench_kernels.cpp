// Times the OpenMP kernels against their serial references on random point
// sets and checks that both return the same answer.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "nrow/incidence.hpp"
#include "nrow/kernels.hpp"
#include "nrow/rng.hpp"

using namespace nrow;

namespace {

double best_ms(int reps, const std::function<void()>& fn) {
    double best = 0;
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        best = r == 0 ? ms : std::min(best, ms);
    }
    return best;
}

void report(const char* kernel, std::size_t points, double serial_ms, double parallel_ms, bool same) {
    std::printf("%-20s %8zu %12.3f %12.3f %8.2f %s\n", kernel, points, serial_ms, parallel_ms, serial_ms / parallel_ms,
                same ? "same" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"OpenMP kernels vs serial references"};
    std::vector<std::int64_t> sizes{500, 1000, 2000};
    std::int64_t box = 60;
    int k = 4;
    int reps = 3;
    int threads = 0;
    std::uint64_t seed = 1;
    app.add_option("--points", sizes, "point-set sizes")->capture_default_str();
    app.add_option("--box", box, "points are drawn from [0, box)^2")->capture_default_str();
    app.add_option("--k", k, "rich-line threshold")->capture_default_str();
    app.add_option("--reps", reps, "best of this many runs")->capture_default_str();
    app.add_option("--threads", threads, "OpenMP threads, 0 for the default");
    app.add_option("--seed", seed)->capture_default_str();
    CLI11_PARSE(app, argc, argv);
    if (threads > 0) omp_set_num_threads(threads);

    std::printf("threads %d, box %lld, k %d\n", kernels::max_threads(), static_cast<long long>(box), k);
    std::printf("%-20s %8s %12s %12s %8s\n", "kernel", "points", "serial_ms", "openmp_ms", "speedup");
    bool all_same = true;
    Rng rng(seed);
    for (std::int64_t size : sizes) {
        const auto pts = random_corpus(std::min(size, box * box), box, rng);
        const std::span<const GridPoint> fresh(pts.data(), std::max<std::size_t>(1, pts.size() / 10));

        std::vector<kernels::LineGroup> s, p;
        const double s1 = best_ms(reps, [&] { s = kernels::rich_line_groups_serial(pts, k); });
        const double p1 = best_ms(reps, [&] { p = kernels::rich_line_groups(pts, k); });
        report("rich_line_groups", pts.size(), s1, p1, s == p);
        all_same = all_same && s == p;

        const double s2 = best_ms(reps, [&] { s = kernels::rich_lines_through_serial(pts, fresh, k); });
        const double p2 = best_ms(reps, [&] { p = kernels::rich_lines_through(pts, fresh, k); });
        report("rich_lines_through", pts.size(), s2, p2, s == p);
        all_same = all_same && s == p;

        std::vector<kernels::LineInterval> intervals;
        for (const auto& g : p) intervals.push_back({g.line, g.params.front(), g.params.back()});
        std::vector<std::int64_t> sc, pc;
        const double s3 = best_ms(reps, [&] { sc = kernels::interval_counts_serial(pts, intervals); });
        const double p3 = best_ms(reps, [&] { pc = kernels::interval_counts(pts, intervals); });
        report("interval_counts", pts.size(), s3, p3, sc == pc);
        all_same = all_same && sc == pc;
    }
    return all_same ? 0 : 1;
}
