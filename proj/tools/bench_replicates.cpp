// Times the Monte Carlo replicate loop: serial reference vs OpenMP, and
// checks that both produce the same report.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "postlasso/simulate.hpp"

namespace pl = postlasso;

namespace {

pl::ExperimentSpec bench_spec(int reps, int threads) {
  pl::ExperimentSpec spec;
  spec.graph.kind = pl::GraphKind::ScaleFree;
  spec.graph.p = 100;
  spec.graph.edge_density = 0.05;
  spec.graph.signal_count = 5;
  spec.graph.rank_step = 10;
  spec.rho = 0.2;
  spec.n = 300;
  spec.snr = 0.3;
  spec.beta_star = pl::Vector::Zero(100);
  spec.beta_star[0] = 1.0;
  for (int j = 1; j < 5; ++j) spec.beta_star[j] = 0.1;
  spec.lambda_rule = pl::LambdaRule::Sup;
  spec.replicates = reps;
  spec.seed = 7;
  spec.threads = threads;
  return spec;
}

double time_run(const pl::ExperimentSpec& spec, bool parallel,
                pl::MetricsReport* report) {
  const auto start = std::chrono::steady_clock::now();
  *report = parallel
                ? pl::run_experiment(spec, pl::ExperimentKind::Coverage)
                : pl::run_experiment_serial(spec, pl::ExperimentKind::Coverage);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

bool same_report(const pl::MetricsReport& a, const pl::MetricsReport& b) {
  return a.coverage == b.coverage && a.avg_length == b.avg_length &&
         a.determinism == b.determinism && a.pairs == b.pairs &&
         a.covered == b.covered && a.empty_sets == b.empty_sets &&
         a.failures == b.failures;
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 40;

  pl::MetricsReport serial_report;
  const double serial_s = time_run(bench_spec(reps, 1), false, &serial_report);
  std::printf("serial          : %7.2f s  (%.1f ms/replicate)\n", serial_s,
              1000.0 * serial_s / reps);

#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
#else
  const int max_threads = 1;
#endif
  for (int threads = 1; threads <= max_threads; threads *= 2) {
    pl::MetricsReport report;
    const double s = time_run(bench_spec(reps, threads), true, &report);
    std::printf("openmp %2d thread: %7.2f s  speedup %.2fx  match=%s\n",
                threads, s, serial_s / s,
                same_report(serial_report, report) ? "yes" : "NO");
    if (!same_report(serial_report, report)) return 1;
  }
  return 0;
}
