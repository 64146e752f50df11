// Reduces the PAPR of one random 16-PSK OFDM symbol with both solvers and
// prints the before/after numbers.
//
//   reduce_symbol [seed]

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "trpapr/trpapr.hpp"

int main(int argc, char** argv) {
  using namespace trpapr;
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;

  const TonePlan plan = TonePlan::spread(512, 64);
  Rng rng(seed);
  const ComplexSignal data = map_symbols(random_labels(rng, plan.num_data(), 16), Constellation::psk(16));
  const std::vector<cplx> none(plan.num_reserved());
  std::printf("no reduction   %.3f dB\n", papr_db(idft(embed(data.samples(), none, plan))));

  SolverConfig cfg;
  cfg.init = RandomPhases{seed};
  const SolverResult pgd = solve(data, plan, cfg);
  std::printf("unimodular RT  %.3f dB  (p = %g, %zu iterations)\n", pgd.papr_db, cfg.p, pgd.iterations_run);

  QcqpConfig qcfg;
  qcfg.p_max = static_cast<double>(plan.num_reserved());
  const QcqpResult q = solve_qcqp(data, plan, qcfg);
  std::printf("power-ball RT  %.3f dB  (%zu iterations)\n", q.papr_db, q.iterations);
  return 0;
}
