// bp-invlab: run experiment protocols, estimate restricted rates, or run the
// acceptance suite.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bpinv/bench/config.hpp"
#include "bpinv/bench/experiment.hpp"
#include "bpinv/check/acceptance.hpp"
#include "bpinv/error.hpp"
#include "bpinv/kernels.hpp"
#include "bpinv/rate_lab.hpp"
#include "bpinv/transforms.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCellFailed = 1;
constexpr int kExitConfig = 2;

int cmd_run(const std::string& config_path, bool paper_scale, const std::string& out_override, unsigned threads) {
  bpinv::bench::ExperimentConfig cfg;
  try {
    cfg = bpinv::bench::load_config(config_path);
    if (paper_scale) bpinv::bench::apply_paper_scale(cfg);
  } catch (const bpinv::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const std::string out = out_override.empty() ? cfg.output : out_override;
  if (out.empty()) {
    std::cerr << "config error: no output path (set `output` or pass --out)\n";
    return kExitConfig;
  }
  const bpinv::bench::ResultTable table = bpinv::bench::run_experiment(cfg, {threads});
  try {
    bpinv::bench::emit_csv(table, out);
  } catch (const bpinv::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitCellFailed;
  }
  std::cerr << "wrote " << table.rows.size() << " rows to " << out << "\n";
  for (const auto& f : table.failures) std::cerr << "cell failed: " << f.cell << ": " << f.message << "\n";
  return table.failures.empty() ? kExitOk : kExitCellFailed;
}

int cmd_rates(long n, long m, long k, int supports, std::uint64_t seed) {
  const bpinv::DenseOperator op = bpinv::gaussian_sensing(m, n, bpinv::SeededRng(seed));
  const bpinv::RateEstimate est = bpinv::estimate_restricted_rates(op, k, supports, bpinv::SeededRng(seed, 1));
  const auto s = op.spectral_summary();
  std::printf("n,m,k,supports,seed,condition_ratio,p_ls_hat,p_bp_hat,ratio\n");
  std::printf("%ld,%ld,%ld,%d,%llu,%.17g,%.17g,%.17g,%.17g\n", n, m, k, supports,
              static_cast<unsigned long long>(seed), s.condition_ratio, est.p_ls_hat, est.p_bp_hat, est.ratio);
  return kExitOk;
}

int cmd_check(const std::vector<int>& ids) {
  std::printf("kernels: %s\n", std::string(bpinv::kernels::to_string(bpinv::kernels::active_backend())).c_str());
  int failed = 0;
  bpinv::check::run_all(ids, [&](const bpinv::check::CriterionResult& r) {
    if (!r.passed) ++failed;
    std::printf("%s\n", bpinv::check::format_line(r).c_str());
    std::fflush(stdout);
  });
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? kExitOk : kExitCellFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-squares vs back-projection fidelity lab"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment config and write a CSV");
  std::string config_path, out;
  bool paper_scale = false;
  unsigned threads = 0;
  run->add_option("--config", config_path, "Experiment config file")->required();
  run->add_flag("--paper-scale", paper_scale, "Raise dimensions toward n = 128^2");
  run->add_option("--out", out, "Output CSV (overrides the config's output)");
  run->add_option("--threads", threads, "Worker cap (default: BP_INVLAB_THREADS or core count)");

  auto* rates = app.add_subcommand("rates", "Monte Carlo restricted-rate estimates for a Gaussian operator");
  long n = 256, m = 128, k = 10;
  int supports = bpinv::kDefaultNumSupports;
  std::uint64_t seed = 1;
  rates->add_option("--n", n, "Signal length")->check(CLI::PositiveNumber);
  rates->add_option("--m", m, "Measurements")->check(CLI::PositiveNumber);
  rates->add_option("--k", k, "Support size")->check(CLI::PositiveNumber);
  rates->add_option("--supports", supports, "Number of sampled supports")->check(CLI::PositiveNumber);
  rates->add_option("--seed", seed, "Seed");

  auto* check = app.add_subcommand("check", "Run the acceptance suite");
  std::vector<int> ids;
  check->add_option("--only", ids, "Criterion ids to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, paper_scale, out, threads);
    if (*rates) return cmd_rates(n, m, k, supports, seed);
    if (*check) return cmd_check(ids);
  } catch (const bpinv::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == bpinv::ErrorCode::ConfigError ? kExitConfig : kExitCellFailed;
  }
  return kExitOk;
}
