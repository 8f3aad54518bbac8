#include "bpinv/check/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <optional>

#include "bpinv/bench/experiment.hpp"
#include "bpinv/check/oracles.hpp"
#include "bpinv/error.hpp"
#include "bpinv/fidelity.hpp"
#include "bpinv/metrics.hpp"
#include "bpinv/priors.hpp"
#include "bpinv/rate_lab.hpp"
#include "bpinv/solvers.hpp"
#include "bpinv/transforms.hpp"

namespace bpinv::check {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// Per-iteration contraction ratios d_{t+1} / d_t while d_t stays above
// floor * d_0 (below that, round-off dominates).
std::vector<double> contraction_ratios(const std::vector<double>& d, double floor) {
  std::vector<double> out;
  if (d.empty()) return out;
  const double cutoff = floor * d.front();
  for (std::size_t t = 0; t + 1 < d.size(); ++t) {
    if (!(d[t] > cutoff)) break;
    out.push_back(d[t + 1] / d[t]);
  }
  return out;
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? -kInf : *std::max_element(v.begin(), v.end());
}

// ---------------------------------------------------------------- 1
CriterionResult fidelity_equivalence() {
  CriterionResult r;
  SeededRng rng(101);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Matrix a = rng.normal_matrix(20, 50, 1.0 / std::sqrt(20.0));
    const Vector x = rng.normal_vector(50);
    const Vector y = rng.normal_vector(20);
    const FidelityTerm f(FidelityKind::BP, DenseOperator::build(a), y);
    worst = std::max(worst, rel_diff(f.value(x), oracle::bp_value_sqrt_form(a, y, x)));
  }
  r.passed = worst <= 1e-10;
  r.detail = fmt("max relative difference %.2e over 50 instances (tol 1e-10)", worst);
  return r;
}

// ---------------------------------------------------------------- 2
CriterionResult oracle_warmup() {
  CriterionResult r;
  double worst_bp_step = 0.0, worst_margin = -kInf;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SeededRng rng(seed, 7);
    const DenseOperator op = gaussian_sensing(64, 128, SeededRng(seed));
    const Vector x_gt = rng.normal_vector(128, 50.0);
    const Vector y = add_noise_for_snr(op.forward(x_gt), NoiseSpec{20.0, rng.substream(1)});
    const Prior oracle_prior = make_oracle(x_gt, op);
    const Vector x_star = op.pinv(y) + op.null_project(x_gt);

    SolverConfig one;
    one.max_iters = 1;
    const Vector x1 = pgd(FidelityTerm(FidelityKind::BP, op, y), oracle_prior, one).x;
    SolverConfig two;
    two.max_iters = 2;
    const Vector x2 = pgd(FidelityTerm(FidelityKind::BP, op, y), oracle_prior, two).x;
    const double step = (x2 - x1).norm();
    worst_bp_step = std::max(worst_bp_step, step);
    ok = ok && step <= 1e-10;

    SolverConfig ls_cfg;
    ls_cfg.max_iters = 300;
    ls_cfg.x_star = x_star;
    const SolveResult ls = pgd(FidelityTerm(FidelityKind::LS, op, y), oracle_prior, ls_cfg);
    const double bound = 1.0 - op.spectral_summary().condition_ratio;
    const double rate = max_of(contraction_ratios(ls.trace.distance_star, 1e-9));
    worst_margin = std::max(worst_margin, rate - bound);
    ok = ok && rate <= bound + 1e-8;
  }
  r.passed = ok;
  r.detail = fmt("BP max ||x2-x1|| = %.2e (tol 1e-10); LS max(rate - bound) = %.2e (tol 1e-8); 10 seeds",
                 worst_bp_step, worst_margin);
  return r;
}

// ---------------------------------------------------------------- 3
CriterionResult samplewise_ordering() {
  CriterionResult r;
  long violations = 0, samples = 0, ordering_failures = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (Index m : {64, 128, 192}) {
      const DenseOperator op = gaussian_sensing(m, 256, SeededRng(seed, static_cast<std::uint64_t>(m)));
      const RateEstimate est = estimate_restricted_rates(op, 10, 500, SeededRng(seed, 1000 + m));
      for (std::size_t i = 0; i < est.bp_terms.size(); ++i) {
        ++samples;
        if (est.bp_terms[i] < est.ls_terms[i] - 1e-10) ++violations;
      }
      if (est.p_bp_hat > est.p_ls_hat + 1e-10) ++ordering_failures;
    }
  }
  r.passed = violations == 0 && ordering_failures == 0;
  r.detail = fmt("%ld samplewise violations in %ld supports, %ld estimate-level p_bp > p_ls (n=256, k=10, m in "
                 "{64,128,192}, 3 seeds)",
                 violations, samples, ordering_failures);
  return r;
}

// ---------------------------------------------------------------- 4
CriterionResult restricted_ratio_trends() {
  CriterionResult r;
  int good_seeds = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    std::vector<double> by_m, by_k;
    for (Index m : {64, 128, 192}) {
      const DenseOperator op = gaussian_sensing(m, 256, SeededRng(seed, static_cast<std::uint64_t>(m)));
      by_m.push_back(estimate_restricted_rates(op, 10, 500, SeededRng(seed, 2000 + m)).ratio);
    }
    const DenseOperator op128 = gaussian_sensing(128, 256, SeededRng(seed, 128));
    for (Index k : {5, 10, 20}) by_k.push_back(estimate_restricted_rates(op128, k, 500, SeededRng(seed, 3000 + k)).ratio);
    const bool m_trend = by_m[0] < 1.0 && by_m[0] > by_m[1] && by_m[1] > by_m[2];
    const bool k_trend = by_k[0] < by_k[1] && by_k[1] < by_k[2] && by_k[2] <= 1.0;
    if (m_trend && k_trend) ++good_seeds;
    detail += fmt("seed %llu: m->[%.3f %.3f %.3f] k->[%.3f %.3f %.3f]%s; ", static_cast<unsigned long long>(seed),
                  by_m[0], by_m[1], by_m[2], by_k[0], by_k[1], by_k[2], m_trend && k_trend ? "" : " (miss)");
  }
  r.passed = good_seeds >= 2;
  r.detail = detail + fmt("%d/3 seeds show both trends (need 2)", good_seeds);
  return r;
}

// ---------------------------------------------------------------- 5
CriterionResult condition_anchor() {
  CriterionResult r;
  const double ratios[] = {0.5, 0.3, 0.1};
  bool ok = true;
  std::string detail;
  for (double q : ratios) {
    const Index m = static_cast<Index>(std::llround(q * 4096));
    const double mp = std::pow((1.0 - std::sqrt(q)) / (1.0 + std::sqrt(q)), 2);
    const double measured = gaussian_sensing(m, 4096, SeededRng(5)).spectral_summary().condition_ratio;
    const bool hit = std::abs(measured - mp) <= 0.2 * mp;
    ok = ok && hit;
    detail += fmt("m/n=%.1f: %.4f vs %.4f%s; ", q, measured, mp, hit ? "" : " (out of band)");
  }
  r.passed = ok;
  r.detail = detail + "band +-20%, n=4096";
  return r;
}

// ---------------------------------------------------------------- 6
CriterionResult controlled_noiseless() {
  CriterionResult r;
  constexpr int kBudget = 2000;
  int seeds_ok = 0;
  double worst_r2 = 1.0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const bench::CsProblem p = bench::make_sparse_cs_problem(1024, 512, 50, kInf, SeededRng(seed));
    const double norm = p.x_gt.norm();
    std::optional<int> hit[2];
    double r2[2] = {0.0, 0.0};
    int idx = 0;
    for (FidelityKind kind : {FidelityKind::LS, FidelityKind::BP}) {
      SolverConfig cfg;
      cfg.max_iters = kBudget;
      cfg.x_gt = p.x_gt;
      const SolveResult res = pgd(FidelityTerm(kind, p.op, p.y), make_l1_ball(p.x_gt.lpNorm<1>()), cfg);
      const auto& d = res.trace.distance_gt;
      for (std::size_t t = 0; t < d.size(); ++t) {
        if (d[t] <= 1e-6 * norm) {
          hit[idx] = res.trace.iteration[t];
          break;
        }
      }
      if (hit[idx]) {
        const EmpiricalRate fit = empirical_rate(res.trace, RateReference::Gt, 1, *hit[idx]);
        r2[idx] = fit.outcome == RateOutcome::ZeroDistance ? 1.0 : fit.r2;
      }
      ++idx;
    }
    const bool ok = hit[0] && hit[1] && *hit[1] < *hit[0] && r2[0] >= 0.95 && r2[1] >= 0.95;
    worst_r2 = std::min({worst_r2, r2[0], r2[1]});
    if (ok) ++seeds_ok;
    detail += fmt("%s/%s ", hit[0] ? std::to_string(*hit[0]).c_str() : "-", hit[1] ? std::to_string(*hit[1]).c_str() : "-");
  }
  r.passed = seeds_ok == 10;
  r.detail = fmt("iterations to 1e-6 (LS/BP): %s| min r2 %.4f; %d/10 seeds ok", detail.c_str(), worst_r2, seeds_ok);
  return r;
}

// ---------------------------------------------------------------- 7
CriterionResult condition_trend() {
  CriterionResult r;
  constexpr int kBudget = 1000;
  const double ratios[] = {0.1, 0.3, 0.5};
  int seeds_ok = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SeededRng base(seed);
    SeededRng sig = base.substream(1);
    const Vector x_gt = bench::synthetic_sparse(1024, 10, sig);
    const double radius = x_gt.lpNorm<1>();
    int gaps[3];
    double speedup[3];
    for (int g = 0; g < 3; ++g) {
      const Index m = static_cast<Index>(std::llround(ratios[g] * 1024));
      const DenseOperator op = gaussian_sensing(m, 1024, base.substream(100 + g));
      const Vector y = add_noise_for_snr(op.forward(x_gt), NoiseSpec{20.0, base.substream(200 + g)});
      SolverConfig cfg;
      cfg.max_iters = kBudget;
      cfg.x_gt = x_gt;
      const SolveResult ls = pgd(FidelityTerm(FidelityKind::LS, op, y), make_l1_ball(radius), cfg);
      const SolveResult bp = pgd(FidelityTerm(FidelityKind::BP, op, y), make_l1_ball(radius), cfg);
      const bench::ThresholdCrossing c = bench::iterations_to_threshold(ls.trace, bp.trace);
      const int it_ls = c.first.value_or(kBudget + 1);
      const int it_bp = c.second.value_or(kBudget + 1);
      gaps[g] = it_ls - it_bp;
      speedup[g] = static_cast<double>(it_ls) / std::max(it_bp, 1);
    }
    const bool ok = gaps[0] < gaps[1] && gaps[1] < gaps[2];
    if (ok) ++seeds_ok;
    detail += fmt("seed %llu gaps [%d %d %d] LS/BP [%.1f %.1f %.1f]; ", static_cast<unsigned long long>(seed), gaps[0],
                  gaps[1], gaps[2], speedup[0], speedup[1], speedup[2]);
  }
  r.passed = seeds_ok >= 3;
  r.detail = detail + fmt("%d/5 seeds with strictly increasing gap over m/n 0.1,0.3,0.5 (need 3)", seeds_ok);
  return r;
}

// ---------------------------------------------------------------- 8
CriterionResult tikhonov_rates() {
  CriterionResult r;
  bool ok = true;
  double worst_margin = -kInf;
  int order_ok = 0;
  double bp_max = 0.0, ls_max = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SeededRng rng(seed, 11);
    const DenseOperator op = gaussian_sensing(64, 128, SeededRng(seed));
    const Vector x_gt = rng.normal_vector(128, 50.0);
    const Vector y = add_noise_for_snr(op.forward(x_gt), NoiseSpec{20.0, rng.substream(1)});
    const Matrix d = Matrix::Identity(128, 128);
    const TikhonovPrior tik(1.0, d);
    const Vector x0 = rng.normal_vector(128, 50.0);
    double measured[2];
    int idx = 0;
    for (FidelityKind kind : {FidelityKind::LS, FidelityKind::BP}) {
      const FidelityTerm f(kind, op, y);
      const double mu = f.default_step_size();
      const double delta = contraction_delta(tik.scaled(mu), op);
      const double bound = theorem2_bound(f, delta);
      const Matrix w = kind == FidelityKind::LS ? Matrix(op.matrix().transpose())
                                                : oracle::pinv_normal_equations(op.matrix());
      SolverConfig cfg;
      cfg.max_iters = 200;
      cfg.init = InitPolicy::Explicit;
      cfg.x0 = x0;
      cfg.x_star = oracle::tikhonov_stationary_point(w, op.matrix(), y, 1.0, d);
      const SolveResult res = proximal_gradient(f, tik, 1.0, cfg);
      measured[idx] = max_of(contraction_ratios(res.trace.distance_star, 1e-9));
      worst_margin = std::max(worst_margin, measured[idx] - bound);
      ok = ok && measured[idx] <= bound + 1e-6;
      ++idx;
    }
    ls_max = std::max(ls_max, measured[0]);
    bp_max = std::max(bp_max, measured[1]);
    if (measured[1] <= measured[0]) ++order_ok;
  }
  r.passed = ok && order_ok == 10;
  r.detail = fmt("max(rate - bound) = %.2e (tol 1e-6); max rate LS %.4f, BP %.4f; BP <= LS in %d/10 seeds",
                 worst_margin, ls_max, bp_max, order_ok);
  return r;
}

// ---------------------------------------------------------------- 9
CriterionResult alista_closed_form() {
  CriterionResult r;
  double worst_constraint = 0.0, worst_gap = -kInf;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const DenseOperator op = gaussian_sensing(4, 8, SeededRng(seed, 9));
    const Matrix w = alista_weights(op).w_tilde();
    const Matrix& a = op.matrix();
    for (Index i = 0; i < a.cols(); ++i) {
      worst_constraint = std::max(worst_constraint, std::abs(w.col(i).dot(a.col(i)) - 1.0));
    }
    const double closed = (w.transpose() * a).squaredNorm();
    worst_gap = std::max(worst_gap, closed - oracle::alista_numeric_objective(a));
  }
  r.passed = worst_constraint <= 1e-10 && worst_gap <= 1e-6;
  r.detail = fmt("max constraint residual %.2e (tol 1e-10); max(closed - numeric) %.2e (tol 1e-6); 20 operators",
                 worst_constraint, worst_gap);
  return r;
}

// ---------------------------------------------------------------- 10
CriterionResult ista_family() {
  CriterionResult r;
  constexpr int kIstaBudget = 1000;
  constexpr int kFastBudget = kIstaBudget / 5;
  constexpr double kBeta = 4.64;
  int seeds_ok = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SeededRng base(seed);
    SeededRng sig = base.substream(1);
    const DenseOperator op = column_normalize(gaussian_sensing(512, 1024, base.substream(100)));
    const Vector x_gt = bench::synthetic_sparse(1024, 50, sig);
    const Vector y = add_noise_for_snr(op.forward(x_gt), NoiseSpec{20.0, base.substream(200)});
    const Prior l1 = make_soft_threshold(1.0);
    SolverConfig cfg;
    cfg.init = InitPolicy::PinvOfY;
    cfg.x_gt = x_gt;
    try {
      cfg.max_iters = kIstaBudget;
      const SolveResult ista = proximal_gradient(FidelityTerm(FidelityKind::LS, op, y), l1, kBeta, cfg);
      cfg.max_iters = kFastBudget;
      const SolveResult idbp = proximal_gradient(FidelityTerm(FidelityKind::BP, op, y), l1, kBeta, cfg);
      const SolveResult alista = alista_run(alista_weights(op), y, {kBeta}, 1.0, cfg);
      double gap = 0.0;
      for (std::size_t t = 0; t < idbp.trace.size(); ++t) {
        gap = std::max(gap, std::abs(idbp.trace.psnr_gt[t] - alista.trace.psnr_gt[t]));
      }
      const double target = ista.trace.psnr_gt.back();
      const double best_idbp = *std::max_element(idbp.trace.psnr_gt.begin(), idbp.trace.psnr_gt.end());
      const double best_alista = *std::max_element(alista.trace.psnr_gt.begin(), alista.trace.psnr_gt.end());
      const bool ok = gap <= 0.5 && best_idbp >= target && best_alista >= target;
      if (ok) ++seeds_ok;
      detail += fmt("seed %llu: gap %.2f dB, ISTA %.2f, IDBP %.2f, ALISTA %.2f; ",
                    static_cast<unsigned long long>(seed), gap, target, best_idbp, best_alista);
    } catch (const Error& e) {
      detail += fmt("seed %llu: %s; ", static_cast<unsigned long long>(seed), e.what());
    }
  }
  r.passed = seeds_ok >= 3;
  r.detail = detail + fmt("%d/5 seeds within 0.5 dB and reaching ISTA's final PSNR in %d iterations (need 3)",
                          seeds_ok, kFastBudget);
  return r;
}

// ---------------------------------------------------------------- 11
CriterionResult property_suites() {
  CriterionResult r;
  int failures = 0;
  std::string detail;
  SeededRng rng(1111);

  // Nonexpansiveness of every convex prior map.
  {
    const Index n = 16;
    const DenseOperator op = gaussian_sensing(8, n, SeededRng(1112));
    const std::vector<std::pair<const char*, Prior>> priors = {
        {"l1ball", make_l1_ball(3.0)},
        {"soft", make_soft_threshold(0.7)},
        {"oracle", make_oracle(rng.normal_vector(n), op)},
        {"tikhonov", make_tikhonov(0.8, rng.normal_matrix(n + 4, n))},
    };
    int bad = 0;
    for (const auto& [name, prior] : priors) {
      for (int i = 0; i < 1000; ++i) {
        const Vector z1 = rng.normal_vector(n, 2.0), z2 = rng.normal_vector(n, 2.0);
        if ((apply_prior(prior, z1) - apply_prior(prior, z2)).norm() > (z1 - z2).norm() + 1e-12) ++bad;
      }
    }
    failures += bad;
    detail += fmt("nonexpansive %d/4000 bad; ", bad);
  }
  // l1-ball projection against the breakpoint oracle.
  {
    int bad = 0;
    for (int i = 0; i < 500; ++i) {
      const Vector v = rng.normal_vector(20, 3.0);
      const double radius = 0.05 + 10.0 * rng.uniform();
      if ((project_l1_ball(v, radius) - oracle::l1_ball_breakpoint(v, radius)).norm() > 1e-9 * std::max(1.0, v.norm())) ++bad;
    }
    failures += bad;
    detail += fmt("l1 KKT %d/500 bad; ", bad);
  }
  // Gradients against central differences.
  {
    int bad = 0;
    double worst = 0.0;
    for (FidelityKind kind : {FidelityKind::LS, FidelityKind::BP}) {
      const DenseOperator op = gaussian_sensing(10, 20, SeededRng(1113));
      const FidelityTerm f(kind, op, rng.normal_vector(10));
      for (int i = 0; i < 20; ++i) {
        const Vector x = rng.normal_vector(20);
        const Vector g = f.gradient(x);
        const Vector fd = oracle::finite_difference_gradient([&f](const Vector& v) { return f.value(v); }, x);
        const double err = (g - fd).norm() / std::max(g.norm(), 1e-12);
        worst = std::max(worst, err);
        if (err > 1e-5) ++bad;
      }
    }
    failures += bad;
    detail += fmt("gradient %d/40 bad (worst %.1e); ", bad, worst);
  }
  // Haar isometry and perfect reconstruction.
  {
    int bad = 0;
    for (Index side : {2, 4, 8, 16, 32, 64}) {
      const HaarBasis basis = HaarBasis::full(side);
      for (int i = 0; i < 5; ++i) {
        const Vector x = rng.normal_vector(side * side, 100.0);
        const Vector h = haar_transform(basis, HaarDirection::Forward, x);
        const Vector back = haar_transform(basis, HaarDirection::Inverse, h);
        if (std::abs(h.norm() - x.norm()) > 1e-12 * x.norm() || (back - x).norm() > 1e-12 * x.norm()) ++bad;
      }
    }
    failures += bad;
    detail += fmt("Haar %d/30 bad; ", bad);
  }
  // Byte-identical CSV for an identical config.
  {
    const char* text =
        "experiment = \"cs_pgd_sweepR\"\n"
        "n = 128\nm = 64\nk = 8\nsnr_db = 20\n"
        "r_scales = [0.5, 1.0]\niters = 40\nstar_iters = 80\nseeds = [3, 4]\n";
    const bench::ExperimentConfig cfg = bench::parse_config(text);
    const std::string a = bench::to_csv(bench::run_experiment(cfg, {2}));
    const std::string b = bench::to_csv(bench::run_experiment(cfg, {1}));
    const bool same = a == b;
    if (!same) ++failures;
    detail += fmt("determinism %s", same ? "identical" : "DIFFERENT");
  }
  r.passed = failures == 0;
  r.detail = detail;
  return r;
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "fidelity-form equivalence", fidelity_equivalence},
      {2, "oracle-prior warm-up rates", oracle_warmup},
      {3, "samplewise restricted-term ordering", samplewise_ordering},
      {4, "restricted-rate ratio trends", restricted_ratio_trends},
      {5, "Gaussian condition-ratio anchor", condition_anchor},
      {6, "controlled noiseless linear convergence", controlled_noiseless},
      {7, "BP advantage grows with m/n", condition_trend},
      {8, "Tikhonov proximal-gradient rate bound", tikhonov_rates},
      {9, "ALISTA closed-form weights", alista_closed_form},
      {10, "ISTA / l1-IDBP / untrained ALISTA", ista_family},
      {11, "property suites", property_suites},
  };
  return list;
}

CriterionResult run_criterion(const Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = c.run();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.id = c.id;
  r.name = c.name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_all(const std::vector<int>& ids,
                                     const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const Criterion& c : criteria()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    out.push_back(run_criterion(c));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  return fmt("%s [%2d] %s: ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str()) + r.detail +
         fmt(" (%.2f s)", r.seconds);
}

}  // namespace bpinv::check
