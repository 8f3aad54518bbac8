#include "bpinv/bench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <thread>

#include "bpinv/bench/image.hpp"
#include "bpinv/error.hpp"
#include "bpinv/metrics.hpp"
#include "bpinv/rate_lab.hpp"
#include "bpinv/transforms.hpp"

namespace bpinv::bench {
namespace {

// Substream ids; geometry index g is added to the sensing and noise ids.
constexpr std::uint64_t kSignalStream = 1;
constexpr std::uint64_t kSensingStream = 100;
constexpr std::uint64_t kNoiseStream = 200;
constexpr std::uint64_t kSupportStream = 300;

struct Signal {
  std::string id;
  Vector coeffs;  // what the solvers reconstruct
  Index side = 0;
  bool haar = false;
};

struct Job {
  std::uint64_t seed;
  std::size_t image;  // index into cfg.images, unused for synthetic signals
};

struct JobOutput {
  std::vector<ResultRow> rows;
  std::vector<CellFailure> failures;
};

using Solve = std::function<SolveResult(const SolverConfig&)>;

class CellRunner {
 public:
  CellRunner(const ExperimentConfig& cfg, std::uint64_t seed, std::string image, JobOutput& out)
      : cfg_(cfg), seed_(seed), image_(std::move(image)), out_(out) {}

  // Runs the x_* reference pass and the recorded pass for one cell.
  void run(const std::string& fidelity, const std::string& solver, double param, const Vector& x_gt,
           InitPolicy init, const Solve& solve) {
    const std::string cell = describe(fidelity, solver, param);
    try {
      SolverConfig star;
      star.max_iters = cfg_.star_iters;
      star.record_every = cfg_.star_iters;
      star.init = init;
      const Vector x_star = solve(star).x;

      SolverConfig sc;
      sc.max_iters = cfg_.iters;
      sc.record_every = cfg_.record_every;
      sc.init = init;
      sc.x_gt = x_gt;
      sc.x_star = x_star;
      const SolveResult res = solve(sc);
      const IterateTrace& tr = res.trace;
      for (std::size_t i = 0; i < tr.size(); ++i) {
        ResultRow row = base(fidelity, solver, param);
        row.iteration = tr.iteration[i];
        row.psnr_gt = tr.psnr_gt[i];
        row.psnr_star = tr.psnr_star[i];
        row.objective = tr.objective[i];
        row.l1_norm = tr.l1_norm[i];
        row.distance_to_star = tr.distance_star[i];
        out_.rows.push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      out_.failures.push_back({cell, e.what()});
    }
  }

  ResultRow base(const std::string& fidelity, const std::string& solver, double param) const {
    ResultRow row;
    row.experiment = cfg_.name;
    row.seed = seed_;
    row.image = image_;
    row.fidelity = fidelity;
    row.solver = solver;
    row.param = param;
    return row;
  }

  std::string describe(const std::string& fidelity, const std::string& solver, double param) const {
    return cfg_.name + " seed=" + std::to_string(seed_) + " image=" + image_ + " fidelity=" + fidelity +
           " solver=" + solver + " param=" + std::to_string(param);
  }

 private:
  const ExperimentConfig& cfg_;
  std::uint64_t seed_;
  std::string image_;
  JobOutput& out_;
};

Signal make_signal(const ExperimentConfig& cfg, const Job& job, const SeededRng& rng) {
  Signal s;
  if (cfg.signal == SignalKind::Image) {
    const std::string& path = cfg.images[job.image];
    const GrayImage img = load_image_pgm(path);
    if (img.pixels.size() != cfg.n) {
      throw Error(ErrorCode::ConfigError, path + " has " + std::to_string(img.pixels.size()) + " pixels, config n is " +
                                              std::to_string(cfg.n));
    }
    s.id = std::filesystem::path(path).stem().string();
    s.side = img.side;
    s.haar = true;
    s.coeffs = haar_transform(HaarBasis::full(img.side), HaarDirection::Forward, img.pixels);
  } else {
    SeededRng sig = rng.substream(kSignalStream);
    s.id = "synthetic";
    s.side = cfg.side;
    s.haar = cfg.haar;
    s.coeffs = synthetic_sparse(cfg.n, cfg.k, sig);
  }
  if (cfg.kind == ExperimentKind::CsControlled) s.coeffs = sparsify_top_k(s.coeffs, std::min(cfg.k, s.coeffs.size()));
  return s;
}

DenseOperator sensing_for(const Signal& s, Index m, const SeededRng& rng, std::uint64_t g) {
  DenseOperator op = gaussian_sensing(m, s.coeffs.size(), rng.substream(kSensingStream + g));
  return s.haar ? compose_with_basis(op, HaarBasis::full(s.side)) : op;
}

Vector observe(const DenseOperator& op, const Vector& x_gt, double snr_db, const SeededRng& rng, std::uint64_t g) {
  return add_noise_for_snr(op.forward(x_gt), NoiseSpec{snr_db, rng.substream(kNoiseStream + g)});
}

void run_pgd_cells(const ExperimentConfig& cfg, CellRunner& runner, const DenseOperator& op, const Vector& x_gt,
                   const Vector& y, double param, double radius, InitPolicy init) {
  for (FidelityKind kind : cfg.fidelities) {
    const FidelityTerm f(kind, op, y);
    runner.run(std::string(to_string(kind)), "pgd", param, x_gt, init, [&](const SolverConfig& sc) {
      return pgd(f, make_l1_ball(radius), sc);
    });
  }
}

void run_job(const ExperimentConfig& cfg, const Job& job, JobOutput& out) {
  const SeededRng rng(job.seed, 0);
  if (cfg.kind == ExperimentKind::RateCurves) {
    for (std::size_t g = 0; g < cfg.ms.size(); ++g) {
      const Index m = cfg.ms[g];
      const std::string image = "m=" + std::to_string(m);
      CellRunner labeled(cfg, job.seed, image, out);
      try {
        const DenseOperator op = gaussian_sensing(m, cfg.n, rng.substream(kSensingStream + g));
        for (Index k : cfg.ks) {
          const RateEstimate est = estimate_restricted_rates(
              op, k, cfg.num_supports, rng.substream(kSupportStream + 1000 * g + static_cast<std::uint64_t>(k)));
          ResultRow ls = labeled.base("LS", "rate_lab", static_cast<double>(k));
          ls.objective = est.p_ls_hat;
          ResultRow bp = labeled.base("BP", "rate_lab", static_cast<double>(k));
          bp.objective = est.p_bp_hat;
          out.rows.push_back(std::move(ls));
          out.rows.push_back(std::move(bp));
        }
      } catch (const std::exception& e) {
        out.failures.push_back({labeled.describe("*", "rate_lab", static_cast<double>(m)), e.what()});
      }
    }
    return;
  }

  Signal signal;
  try {
    signal = make_signal(cfg, job, rng);
  } catch (const std::exception& e) {
    const std::string which = cfg.signal == SignalKind::Image ? cfg.images[job.image] : "synthetic";
    out.failures.push_back({cfg.name + " seed=" + std::to_string(job.seed) + " image=" + which, e.what()});
    return;
  }
  CellRunner runner(cfg, job.seed, signal.id, out);
  const Vector& x_gt = signal.coeffs;
  const Index n = x_gt.size();
  const double l1 = x_gt.lpNorm<1>();

  auto guarded = [&](const std::string& what, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      out.failures.push_back({runner.describe("*", what, 0.0), e.what()});
    }
  };

  switch (cfg.kind) {
    case ExperimentKind::CsPgdSweepR:
      guarded("setup", [&] {
        const DenseOperator op = sensing_for(signal, cfg.m, rng, 0);
        const Vector y = observe(op, x_gt, cfg.snr_db, rng, 0);
        for (double r : cfg.r_scales) run_pgd_cells(cfg, runner, op, x_gt, y, r, r * l1, InitPolicy::Zeros);
      });
      break;

    case ExperimentKind::CsPgdRatios:
      for (std::size_t g = 0; g < cfg.m_ratios.size(); ++g) {
        const double ratio = cfg.m_ratios[g];
        guarded("setup", [&] {
          const Index m = static_cast<Index>(std::llround(ratio * static_cast<double>(n)));
          const DenseOperator op = sensing_for(signal, m, rng, g);
          const Vector y = observe(op, x_gt, cfg.snr_db, rng, g);
          run_pgd_cells(cfg, runner, op, x_gt, y, ratio, cfg.r_scales.front() * l1, InitPolicy::Zeros);
        });
      }
      break;

    case ExperimentKind::CsControlled:
      guarded("setup", [&] {
        const DenseOperator op = sensing_for(signal, cfg.m, rng, 0);
        const Vector y = observe(op, x_gt, cfg.snr_db, rng, 0);
        run_pgd_cells(cfg, runner, op, x_gt, y, static_cast<double>(cfg.k), l1, InitPolicy::Zeros);
      });
      break;

    case ExperimentKind::CsFistaSweepBeta:
      guarded("setup", [&] {
        const DenseOperator op = sensing_for(signal, cfg.m, rng, 0);
        const Vector y = observe(op, x_gt, cfg.snr_db, rng, 0);
        const Prior l1_prior = make_soft_threshold(1.0);
        for (double beta : cfg.betas)
          for (FidelityKind kind : cfg.fidelities) {
            const FidelityTerm f(kind, op, y);
            runner.run(std::string(to_string(kind)), "fista", beta, x_gt, InitPolicy::Zeros,
                       [&](const SolverConfig& sc) { return fista(f, l1_prior, beta, sc); });
          }
      });
      break;

    case ExperimentKind::IstaFamily:
      guarded("setup", [&] {
        const DenseOperator op = column_normalize(sensing_for(signal, cfg.m, rng, 0));
        const Vector y = observe(op, x_gt, cfg.snr_db, rng, 0);
        const Prior l1_prior = make_soft_threshold(1.0);
        const FidelityTerm ls(FidelityKind::LS, op, y);
        const FidelityTerm bp(FidelityKind::BP, op, y);
        const AlistaWeights weights = alista_weights(op);
        for (double beta : cfg.betas) {
          runner.run("LS", "ista", beta, x_gt, InitPolicy::PinvOfY,
                     [&](const SolverConfig& sc) { return proximal_gradient(ls, l1_prior, beta, sc); });
          runner.run("BP", "idbp", beta, x_gt, InitPolicy::PinvOfY,
                     [&](const SolverConfig& sc) { return proximal_gradient(bp, l1_prior, beta, sc); });
          runner.run("BP", "alista", beta, x_gt, InitPolicy::PinvOfY,
                     [&](const SolverConfig& sc) { return alista_run(weights, y, {beta}, 1.0, sc); });
        }
      });
      break;

    case ExperimentKind::SrPgd:
      guarded("setup", [&] {
        if (signal.side <= 0) throw Error(ErrorCode::ConfigError, "sr_pgd needs an image side");
        const DenseOperator sr = sr_operator(signal.side, cfg.scale, cfg.kernel_size, cfg.kernel_sigma);
        const DenseOperator op = compose_with_basis(sr, HaarBasis::full(signal.side));
        const Vector y = observe(op, x_gt, cfg.snr_db, rng, 0);
        for (double r : cfg.r_scales) run_pgd_cells(cfg, runner, op, x_gt, y, r, r * l1, InitPolicy::PinvOfY);
      });
      break;

    case ExperimentKind::RateCurves:
      break;
  }
}

}  // namespace

Vector synthetic_sparse(Index n, Index k, SeededRng& rng, double peak) {
  if (k < 1 || k > n) throw Error(ErrorCode::BadK, "sparsity " + std::to_string(k) + " out of range");
  Vector x = Vector::Zero(n);
  for (Index j : rng.sample_without_replacement(n, k)) x(j) = rng.normal();
  const double top = x.cwiseAbs().maxCoeff();
  if (top > 0.0) x *= peak / top;
  return x;
}

CsProblem make_sparse_cs_problem(Index n, Index m, Index k, double snr_db, const SeededRng& rng) {
  SeededRng sig = rng.substream(kSignalStream);
  CsProblem p{gaussian_sensing(m, n, rng.substream(kSensingStream)), synthetic_sparse(n, k, sig), Vector()};
  p.y = observe(p.op, p.x_gt, snr_db, rng, 0);
  return p;
}

ThresholdCrossing iterations_to_threshold(const IterateTrace& first, const IterateTrace& second, double margin_db) {
  if (first.psnr_gt.empty() || second.psnr_gt.empty()) {
    throw Error(ErrorCode::InsufficientData, "iterations_to_threshold needs psnr_gt columns");
  }
  ThresholdCrossing out;
  out.threshold = std::min(first.psnr_gt.back(), second.psnr_gt.back()) - margin_db;
  auto crossing = [&](const IterateTrace& t) -> std::optional<int> {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t.psnr_gt[i] >= out.threshold) return t.iteration[i];
    }
    return std::nullopt;
  };
  out.first = crossing(first);
  out.second = crossing(second);
  return out;
}

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("BP_INVLAB_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) n = static_cast<unsigned>(v);
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

ResultTable run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  validate(cfg);
  std::vector<Job> jobs;
  const std::size_t images = cfg.signal == SignalKind::Image ? cfg.images.size() : 1;
  for (std::uint64_t seed : cfg.seeds)
    for (std::size_t i = 0; i < images; ++i) jobs.push_back({seed, i});

  std::vector<JobOutput> outputs(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) run_job(cfg, jobs[j], outputs[j]);
  };
  const unsigned threads = std::min<unsigned>(resolve_threads(options.threads), static_cast<unsigned>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ResultTable table;
  for (JobOutput& o : outputs) {
    std::move(o.rows.begin(), o.rows.end(), std::back_inserter(table.rows));
    std::move(o.failures.begin(), o.failures.end(), std::back_inserter(table.failures));
  }
  table.sort();
  return table;
}

}  // namespace bpinv::bench
