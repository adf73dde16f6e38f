// Serial reference vs OpenMP kernels for the exact counters, plus the
// estimator costs on the same graphs.
//
//   bench_kernels [--reps N] [--gen SPEC]...

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "butterfly/baseline.hpp"
#include "butterfly/bigraph.hpp"
#include "butterfly/exact.hpp"
#include "butterfly/tls.hpp"

namespace {

using namespace bfly;
using Clock = std::chrono::steady_clock;

// Best of `reps` wall times, in milliseconds.
double best_millis(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  return best;
}

void row(const std::string& graph, const std::string& kernel, double serial, double parallel,
         bool agree) {
  std::cout << std::left << std::setw(24) << graph << std::setw(18) << kernel << std::right
            << std::fixed << std::setprecision(2) << std::setw(12) << serial << std::setw(12)
            << parallel << std::setw(9) << (parallel > 0 ? serial / parallel : 0.0)
            << (agree ? "" : "  MISMATCH") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-kernel benchmark"};
  int reps = 3;
  std::vector<std::string> specs{"er:2000,2000,0.05,7", "hub:1000,1000", "kab:200,200",
                                 "er:20000,5000,0.002,3"};
  app.add_option("--reps", reps, "timing repetitions (best is reported)")
      ->check(CLI::PositiveNumber);
  app.add_option("--gen", specs, "generator specs");
  CLI11_PARSE(app, argc, argv);

  std::cout << "threads " << omp_get_max_threads() << "\n\n";
  std::cout << std::left << std::setw(24) << "graph" << std::setw(18) << "kernel" << std::right
            << std::setw(12) << "serial_ms" << std::setw(12) << "omp_ms" << std::setw(9)
            << "speedup" << '\n';

  for (const std::string& spec : specs) {
    const BipartiteGraph g = generate_synthetic(parse_generator_spec(spec));

    std::uint64_t bs = 0, bp = 0;
    const double ts = best_millis(reps, [&] { bs = count_butterflies_exact(g); });
    const double tp = best_millis(reps, [&] { bp = count_butterflies_exact_parallel(g); });
    row(spec, "count", ts, tp, bs == bp);

    std::vector<std::uint64_t> es, ep;
    const double us = best_millis(reps, [&] { es = butterflies_all_edges(g); });
    const double up = best_millis(reps, [&] { ep = butterflies_all_edges_parallel(g); });
    row(spec, "per_edge", us, up, es == ep);

    QueryOracle tls_oracle(g);
    Rng tls_rng(1);
    const EstimateReport tls = tls_estimate(tls_oracle, TlsConfig{}, tls_rng);
    QueryOracle wps_oracle(g);
    Rng wps_rng(1);
    const EstimateReport wps = wps_estimate(wps_oracle, kDefaultWpsRounds, wps_rng);
    std::cout << "  m=" << g.edge_count() << " b=" << bs << std::setprecision(0)
              << "  tls est " << tls.estimate << " q " << tls.queries.total() << " ("
              << std::setprecision(1) << tls.wall_millis << " ms)" << std::setprecision(0)
              << "  wps est " << wps.estimate << " q " << wps.queries.total() << " ("
              << std::setprecision(1) << wps.wall_millis << " ms)\n";
  }
  return 0;
}
