// End-to-end acceptance run.  Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "ridk/combinatorics.hpp"
#include "ridk/convergence.hpp"
#include "ridk/experiment.hpp"
#include "ridk/fields.hpp"
#include "ridk/noise.hpp"
#include "ridk/noise_norms.hpp"
#include "ridk/propagator.hpp"
#include "ridk/solver.hpp"
#include "ridk/specfun.hpp"
#include "ridk/spectrum.hpp"

using namespace ridk;
using oracle::kPi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[192];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// 1. Bessel ratios against the multiprecision quadrature, and the step bound.
Outcome bessel_oracle() {
  double worst = 0.0;
  int flushed = 0;
  bool flush_ok = true;
  bool bound_ok = true;
  for (double x : {1.0, 2.0, 10.0, 100.0, 1e4}) {
    const auto ref = oracle::trapezoid_bessel_ratios(x, 201);
    for (int j = 0; j <= 200; ++j) {
      const long double r = ref[static_cast<std::size_t>(j)];
      const double got = specfun::bessel_ratio(j, x);
      if (r < 1e-300L) {
        ++flushed;
        flush_ok = flush_ok && got == 0.0;
      } else {
        worst = std::max(worst, static_cast<double>(std::abs(got / r - 1.0L)));
      }
      bound_ok = bound_ok && specfun::consecutive_ratio(j, x) < x / (j + 0.5 + x);
      // The bound also holds for the oracle's own consecutive ratio where representable.
      const long double next = ref[static_cast<std::size_t>(j + 1)];
      if (r > 1e-4000L && next > 0.0L) bound_ok = bound_ok && next / r < x / (j + 0.5 + x);
    }
  }
  return {worst < 1e-9 && flush_ok && bound_ok,
          fmt("max rel err %.2e (tol 1e-9), ", worst) + std::to_string(flushed) + " sub-1e-300 ratios flushed to 0" +
              (flush_ok ? "" : " (NOT all zero)") + ", step bound " + (bound_ok ? "holds" : "VIOLATED")};
}

// 2. Trace slopes and the bound-exponent minimiser.
Outcome trace_scaling() {
  const std::array<std::pair<int, double>, 3> cases{{{1, 0.55}, {2, 1.05}, {3, 1.55}}};
  const std::array<double, 4> widths{0.2, 0.1, 0.05, 0.025};
  bool pass = true;
  std::string detail;
  double worst_oracle = 0.0;
  for (const auto& [d, s] : cases) {
    std::vector<double> x, y;
    for (double eps : widths) {
      const int jmax = suggest_jmax(eps, s);
      const double t = sobolev_trace(s, eps, d, jmax);
      x.push_back(1 / eps);
      y.push_back(t);
      if (d < 3 || eps >= 0.1) {
        std::vector<long double> axis;
        for (int j = 0; j <= jmax; ++j) axis.push_back(oracle::boost_bessel_ratio(j, 1.0 / (2 * eps * eps)));
        worst_oracle = std::max(worst_oracle, std::abs(t / oracle::brute_lattice_sum(axis, s, d) - 1.0));
      }
    }
    const double slope = oracle::log_slope(x, y);
    const double target = 2 * s + d;
    const double rel = std::abs(slope / target - 1.0);
    pass = pass && rel < 0.05;
    detail += fmt("d=%g slope %.4f vs %.2f; ", d, slope, target);

    // Exhaustive grid over admissible (alpha, beta) at step 0.01.
    double lowest = std::numeric_limits<double>::infinity();
    int best_a = 0, best_b = 0;
    for (int a = 1; a < 100; ++a) {
      for (int b = 1; b < 100; ++b) {
        if (a + b < 100) continue;
        const double al = a / 100.0, be = b / 100.0;
        const double e = std::max({2 * be * (2 * s + 1), 2 * al * (2 * s + 1), 2 * al + 4 * be * s}) + d - 1;
        if (e < lowest - 1e-12) {
          lowest = e;
          best_a = a;
          best_b = b;
        }
      }
    }
    const auto lib = grid_minimise_bound_exponent(s, d);
    pass = pass && best_a == 50 && best_b == 50 && std::abs(lib.alpha - 0.5) < 1e-12 && std::abs(lib.beta - 0.5) < 1e-12 &&
           std::abs(lib.exponent - target) < 1e-12;
  }
  pass = pass && worst_oracle < 1e-10;
  return {pass, detail + fmt("lattice oracle rel err %.1e, argmin (0.5, 0.5)", worst_oracle)};
}

// 3. Contraction and agreement with the ODE oracle.
Outcome contraction() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_int_distribution<int> wave(-8, 8);
  double worst_err = 0.0;
  double worst_growth = 0.0;
  int double_roots = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + trial % 3;
    std::vector<double> k(static_cast<std::size_t>(d));
    for (auto& v : k) v = wave(rng);
    double k2 = 0.0;
    for (double v : k) k2 += v * v;
    const double gamma = 0.2 + 1.8 * std::abs(uni(rng));
    double c = 0.1 + 2.0 * std::abs(uni(rng));
    if (trial % 10 == 0 && k2 > 0) {
      c = gamma * gamma / (4 * k2);
      ++double_roots;
    }
    const double t = 0.05 + 3.0 * std::abs(uni(rng));
    Complex rho(uni(rng), uni(rng));
    std::vector<Complex> m(static_cast<std::size_t>(d));
    for (auto& v : m) v = {uni(rng), uni(rng)};
    auto energy = [&](Complex r, const std::vector<Complex>& mm) {
      double e = c * std::norm(r);
      for (const auto& v : mm) e += std::norm(v);
      return e;
    };
    Complex rho_ref = rho;
    auto m_ref = m;
    oracle::mode_ode(rho_ref, m_ref, k, t, gamma, c);
    const double e0 = energy(rho, m);
    double prev = e0;
    // Energy along the path at four intermediate times.
    Complex r = rho;
    auto mm = m;
    for (int q = 0; q < 4; ++q) {
      propagate_mode(r, mm, k, t / 4, {gamma, c});
      const double e = energy(r, mm);
      worst_growth = std::max(worst_growth, (e - prev) / e0);
      prev = e;
    }
    propagate_mode(rho, m, k, t, {gamma, c});
    const double scale = std::sqrt(energy(rho_ref, m_ref) / std::max(c, 1e-300)) + std::sqrt(energy(rho_ref, m_ref));
    double err = std::abs(rho - rho_ref);
    for (std::size_t l = 0; l < m.size(); ++l) err = std::max(err, std::abs(m[l] - m_ref[l]));
    worst_err = std::max(worst_err, err / scale);
  }
  const bool pass = worst_err < 1e-8 && worst_growth <= 1e-13;
  return {pass, fmt("max rel ODE err %.2e (tol 1e-8), max energy growth %.1e (rounding slack 1e-13), ", worst_err, worst_growth) +
                    std::to_string(double_roots) + " double-root modes"};
}

// 4. Noise covariance against the wide kernel, and independence of s.
Outcome noise_law() {
  const double eps = 0.1, dt = 0.01;
  const TorusGrid grid(1, suggest_grid_points(eps));
  const NoiseSampler sampler(grid, eps);
  const int M = grid.points();
  const int draws = 10000, offsets = 20;
  std::vector<double> sum(offsets, 0.0), sum2(offsets, 0.0);
  Rng rng(4);
  for (int n = 0; n < draws; ++n) {
    const auto w = sampler.sample_physical(dt, rng)[0];
    for (int o = 0; o < offsets; ++o) {
      double c = 0.0;
      for (int i = 0; i < M; ++i) c += w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>((i + o) % M)];
      c /= M;
      sum[static_cast<std::size_t>(o)] += c;
      sum2[static_cast<std::size_t>(o)] += c * c;
    }
  }
  double worst_z = 0.0;
  for (int o = 0; o < offsets; ++o) {
    const double mean = sum[static_cast<std::size_t>(o)] / draws;
    const double var = sum2[static_cast<std::size_t>(o)] / draws - mean * mean;
    const double se = std::sqrt(var / draws);
    const double want = dt * oracle::von_mises_1d(o * grid.spacing(), std::sqrt(2.0) * eps);
    worst_z = std::max(worst_z, std::abs(mean - want) / se);
  }
  Rng a(8), b(8);
  const auto x = sample_noise_increment(eps, dt, grid, a, 0.3);
  const auto y = sample_noise_increment(eps, dt, grid, b, 1.3);
  bool identical = true;
  for (std::size_t i = 0; i < grid.size(); ++i) identical = identical && x[0][i] == y[0][i];
  return {worst_z < 3.0 && identical,
          fmt("M=%g, max |z| over 20 offsets %.2f (tol 3), ", M, worst_z) + "s=0.3 vs s=1.3 increments " +
              (identical ? "bit-identical" : "DIFFER")};
}

// 5. Mass over 1000 noisy interacting steps.
Outcome mass_conservation() {
  const double eps = 0.1;
  const TorusGrid grid(1, suggest_grid_points(eps));
  SolverConfig cfg;
  cfg.dt = 0.005;
  cfg.horizon = 5.0;
  cfg.eps = eps;
  cfg.particles = 1000;
  cfg.potential = CosinePotential{0.5};
  RidkSolver solver(grid, cfg);
  auto x = smoothed_initial_state(convergence_initial_density(grid, 0.3), eps);
  const Complex mass = x.rho[0];
  Rng rng(5);
  int changed = 0;
  for (int n = 0; n < 1000; ++n) {
    solver.step(x, rng);
    changed += x.rho[0] != mass;
  }
  return {changed == 0, std::to_string(changed) + " of 1000 steps changed the zero mode"};
}

// 6. Noise norm on a constant field.
Outcome noise_norm_scaling() {
  const RegularisedSqrt h(RegularisationSpec::for_dimension(0.05, 2));
  bool pass = true;
  std::string detail;
  double worst_n = 0.0, worst_oracle = 0.0;
  for (const auto& [d, s] : {std::pair{1, 0.55}, std::pair{2, 1.05}}) {
    const TorusGrid grid(d, 16);
    const double c = 0.7;
    const ScalarField rho(grid, std::vector<double>(grid.size(), c));
    NoiseNormParams p;
    p.s = s;
    p.sigma = 1.2;
    p.eps = 0.1;
    for (double n : {1e2, 1e3, 1e4, 1e5}) {
      p.particles = n;
      const double a = noise_hs_norm(rho, h, p);
      p.particles = 2 * n;
      const double b = noise_hs_norm(rho, h, p);
      worst_n = std::max(worst_n, std::abs(a / b - 2.0) / 2.0);
      const int jmax = suggest_jmax(p.eps, s);
      std::vector<long double> axis;
      for (int j = 0; j <= jmax; ++j) axis.push_back(oracle::boost_bessel_ratio(j, 1.0 / (2 * p.eps * p.eps)));
      const double want = d * p.sigma * p.sigma * c / n * oracle::brute_lattice_sum(axis, s, d);
      worst_oracle = std::max(worst_oracle, std::abs(a / want - 1.0));
    }
    std::vector<double> x, y;
    p.particles = 1000;
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
      p.eps = eps;
      x.push_back(1 / eps);
      y.push_back(noise_hs_norm(rho, h, p));
    }
    const double slope = oracle::log_slope(x, y);
    pass = pass && std::abs(slope / (2 * s + d) - 1.0) < 0.05;
    detail += fmt("d=%g eps-slope %.4f vs %.2f; ", d, slope, 2 * s + d);
  }
  pass = pass && worst_n < 1e-14 && worst_oracle < 1e-9;
  return {pass, detail + fmt("1/N deviation %.1e, constant-field oracle rel err %.1e", worst_n, worst_oracle)};
}

double cell(const Table& t, std::size_t row, const std::string& column) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), column);
  return std::stod(t.rows[row][static_cast<std::size_t>(it - t.columns.begin())]);
}

// 7. Vanishing-noise convergence along eps = N^{-1/3}.
Outcome convergence() {
  SimConfig c;
  c.kind = ExperimentKind::convergence;
  c.dim = 1;
  c.theta = 3.0;
  c.s = 0.55;
  c.particle_counts = {1e3, 1e4, 1e5};
  c.replicas = 50;
  c.points = 256;
  c.resolution_tolerance = 1e-2;
  c.threads = 0;
  const auto report = run(c);
  const Table& t = *report.find_table("convergence");
  std::vector<double> n, err, no_exit;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    n.push_back(cell(t, r, "N"));
    err.push_back(cell(t, r, "mean_sup_error"));
    no_exit.push_back(cell(t, r, "no_exit_fraction"));
  }
  bool decreasing = true, monotone = true;
  for (std::size_t i = 1; i < n.size(); ++i) {
    decreasing = decreasing && err[i] < err[i - 1];
    monotone = monotone && no_exit[i] >= no_exit[i - 1];
  }
  const double slope = oracle::log_slope(n, err);
  const double theory = -0.5 * (1.0 - (2 * 0.55 + 1) / 3.0);
  const bool pass = decreasing && monotone && std::abs(slope - theory) <= 0.1;
  return {pass, fmt("errors %.4f, %.4f, %.4f; ", err[0], err[1], err[2]) + fmt("slope %.4f vs %.2f; ", slope, theory) +
                    fmt("no-exit fractions %.2f, %.2f, %.2f; ", no_exit[0], no_exit[1], no_exit[2]) +
                    fmt("T=%.3f", report.fits["horizon"].get<double>())};
}

// The centred micro statistic for uniform i.i.d. particles, by brute lattice sum.
double micro_oracle(double eps, double s) {
  const int jmax = static_cast<int>(14.0 / eps);
  std::vector<long double> axis;
  for (int j = 0; j <= jmax; ++j) {
    const long double r = oracle::boost_bessel_ratio(j, 1.0 / (eps * eps));
    axis.push_back(r * r);
  }
  return std::pow(eps, 2 * s + 1) * (oracle::brute_lattice_sum(axis, s, 1) - 1.0) / std::pow(2 * kPi, 2);
}

// 8. Micro statistic against its oracle, and boundedness along the scaling.
Outcome micro_scaling() {
  SimConfig c;
  c.kind = ExperimentKind::micro_scaling;
  c.dim = 1;
  c.s = 0.55;
  c.eps = 0.1;
  c.particles = 1000;
  c.particle_counts = {1e3, 1e4, 1e5};
  c.replicas = 200;
  c.threads = 0;
  const auto report = run(c);
  const Table& reps = *report.find_table("micro_scaling_replicas");
  // Replica statistics recomputed from the raw per-replica values.
  std::map<double, std::vector<double>> by_n_oracle, by_n_scaling;
  double mean = 0.0, m2 = 0.0;
  int count = 0;
  for (std::size_t r = 0; r < reps.rows.size(); ++r) {
    if (cell(reps, r, "eps") != 0.1 || cell(reps, r, "N") != 1000) continue;
    const double v = cell(reps, r, "value");
    mean += v;
    m2 += v * v;
    ++count;
  }
  mean /= count;
  const double se = std::sqrt((m2 / count - mean * mean) * count / (count - 1) / count);
  const double exact = micro_oracle(0.1, 0.55);
  const double z = std::abs(mean - exact) / se;

  const Table& rows = *report.find_table("micro_scaling");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t r = 0; r < rows.rows.size(); ++r) {
    const double v = cell(rows, r, "S");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {z < 3.0 && hi / lo < 3.0 && count == 200,
          fmt("S=%.5f vs oracle %.5f, z=%.2f (tol 3); ", mean, exact, z) + fmt("max/min along scaling %.3f (tol 3)", hi / lo)};
}

// 9. Appendix identities.
Outcome appendix() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  auto vec = [&](std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = uni(rng);
    return v;
  };
  auto prod = [](const std::vector<double>& v) {
    double p = 1.0;
    for (double x : v) p *= x;
    return p;
  };
  double single = 0.0, twofold = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
    const auto a = vec(n), b = vec(n), c = vec(n), d = vec(n);
    single = std::max(single, std::abs(product_difference_expand(a, b).expansion - (prod(a) - prod(b))));
    twofold = std::max(twofold, std::abs(double_difference_expand(a, b, c, d).expansion - (prod(a) - prod(b) - (prod(c) - prod(d)))));
  }

  const std::array<std::size_t, 9> bell{1, 1, 2, 5, 15, 52, 203, 877, 4140};
  bool bell_ok = true;
  for (int n = 1; n <= 8; ++n) bell_ok = bell_ok && enumerate_partitions(n).size() == bell[static_cast<std::size_t>(n)];

  const double delta = 1.0, step = 1e-3;
  const RegularisedSqrt h(RegularisationSpec::for_dimension(delta, 2));
  const TorusGrid grid(2, 32);
  auto field = [](double x, double y) { return 0.5 + 0.2 * std::cos(x) + 0.1 * std::sin(y); };
  const auto u = ScalarField::from_function(grid, [&](std::span<const double> p) { return field(p[0], p[1]); });
  auto f = [&](double x, double y) { return h(field(x, y)); };
  const std::vector<std::pair<std::vector<int>, std::function<double(double, double)>>> cases{
      {{0}, [&](double x, double y) { return (f(x + step, y) - f(x - step, y)) / (2 * step); }},
      {{0, 1}, [&](double x, double y) {
         return (f(x + step, y + step) - f(x + step, y - step) - f(x - step, y + step) + f(x - step, y - step)) / (4 * step * step);
       }},
      {{0, 0}, [&](double x, double y) { return (f(x + step, y) - 2 * f(x, y) + f(x - step, y)) / (step * step); }},
      {{1, 1}, [&](double x, double y) { return (f(x, y + step) - 2 * f(x, y) + f(x, y - step)) / (step * step); }},
  };
  double faa = 0.0;
  std::vector<double> p(2);
  for (const auto& [axes, fd] : cases) {
    const auto exact = faa_di_bruno_derivative(h, u, axes);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (std::abs(std::abs(u[i]) - 0.5 * delta) < 10 * step) continue;
      grid.coordinates(i, p);
      err = std::max(err, std::abs(exact[i] - fd(p[0], p[1])));
      scale = std::max(scale, std::abs(exact[i]));
    }
    faa = std::max(faa, err / scale);
  }

  double ibp = 0.0;
  Rng frng(10);
  for (int d : {1, 2, 3}) {
    const TorusGrid g(d, 16);
    const auto w = transform(random_bandlimited_field(g, 7, 0.5, frng));
    std::vector<SpectralField> v;
    for (int l = 0; l < d; ++l) v.push_back(transform(random_bandlimited_field(g, 7, 0.5, frng)));
    for (double s : {0.0, 0.55, 1.5}) {
      auto div = divergence(v);
      const auto grad = gradient(w);
      Complex rhs = 0.0;
      for (int l = 0; l < d; ++l) rhs += hs_inner(v[static_cast<std::size_t>(l)], grad[static_cast<std::size_t>(l)], s);
      ibp = std::max(ibp, std::abs(-hs_inner(div, w, s) - rhs) / std::abs(rhs));
    }
  }
  const bool pass = single < 1e-12 && twofold < 1e-12 && bell_ok && faa < 1e-5 && ibp < 1e-10;
  return {pass, fmt("product residuals %.1e / %.1e (tol 1e-12), ", single, twofold) + "Bell counts " +
                    (bell_ok ? "match" : "DIFFER") + fmt(", FD rel err %.1e (tol 1e-5), IBP rel residual %.1e (tol 1e-10)", faa, ibp)};
}

std::map<std::string, std::string> directory_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[entry.path().filename().string()] = s.str();
  }
  return out;
}

// 10. Every subcommand twice, with different thread counts.
Outcome determinism() {
  const std::vector<std::pair<std::string, std::string>> runs{
      {"spectrum", "--d 2 --eps 0.1"},
      {"trace-scaling", "--d 1 --s 0.55 --eps 0.2,0.1,0.05,0.025"},
      {"simulate-particles", "--N 2000 --eps 0.1 --T 0.5 --dt 0.01"},
      {"simulate-ridk", "--N 1000 --eps 0.2 --M 64 --T 0.5 --dt 0.01"},
      {"compare", "--N 500 --eps 0.2 --M 64 --T 0.2 --dt 0.01 --replicas 3"},
      {"convergence", "--theta 3 --s 0.55 --N 100,1000 --replicas 3 --M 64 --T 0.2 --dt 0.02 --resolution-tolerance 1e-2"},
      {"micro-scaling", "--N 100,200 --eps 0.3 --replicas 4"},
      {"verify-appendix", ""},
  };
  const auto root = fs::temp_directory_path() / "ridk_acceptance_determinism";
  fs::remove_all(root);
  int identical = 0;
  std::string failures;
  for (const auto& [cmd, args] : runs) {
    std::array<std::map<std::string, std::string>, 2> outputs;
    bool ran = true;
    for (int k = 0; k < 2; ++k) {
      const auto dir = root / (cmd + std::to_string(k));
      const std::string line = std::string(RIDK_CLI_PATH) + " " + cmd + " " + args + " --seed 17 --threads " +
                               std::to_string(k + 1) + " --out " + dir.string() + " > /dev/null 2>&1";
      const int status = std::system(line.c_str());
      ran = ran && WIFEXITED(status) && WEXITSTATUS(status) <= 1;
      if (fs::exists(dir)) outputs[static_cast<std::size_t>(k)] = directory_bytes(dir);
    }
    if (ran && !outputs[0].empty() && outputs[0] == outputs[1]) {
      ++identical;
    } else {
      failures += " " + cmd;
    }
  }
  fs::remove_all(root);
  return {identical == static_cast<int>(runs.size()),
          std::to_string(identical) + "/" + std::to_string(runs.size()) + " subcommands byte-identical across repeated runs" +
              (failures.empty() ? "" : "; differing:" + failures)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"bessel ratios vs multiprecision quadrature", bessel_oracle},
      {"trace scaling slopes and bound minimiser", trace_scaling},
      {"propagator contraction and ODE agreement", contraction},
      {"noise covariance and s-independence", noise_law},
      {"mass conservation over 1000 steps", mass_conservation},
      {"noise norm scaling in N and eps", noise_norm_scaling},
      {"vanishing-noise convergence", convergence},
      {"micro statistic oracle and scaling", micro_scaling},
      {"appendix identities", appendix},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("criterion %2zu %s  %s: %s [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
