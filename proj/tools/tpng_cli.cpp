// Experiment driver. Every subcommand resolves its configuration from flags
// (optionally seeded from a TOML file via --config, flags win), runs with
// randomness derived from one 64-bit root seed, and emits a JSON report with
// {schema_version, command, config, metrics, pass, runtime} next to any CSV
// data files. Seed split scheme: ensemble k inside a command draws its
// sub-root as derive_seed(seed, k), and replica i of that ensemble runs on
// derive_seed(sub-root, i); worker count only partitions the replica range.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or config error,
// 3 verification failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tpng/detform.hpp"
#include "tpng/lattice.hpp"
#include "tpng/patience.hpp"
#include "tpng/png.hpp"
#include "tpng/qmath.hpp"
#include "tpng/rational.hpp"
#include "tpng/rng.hpp"
#include "tpng/stats.hpp"
#include "tpng/symfun.hpp"
#include "tpng/weights.hpp"

using namespace tpng;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

struct CommonOpts {
  std::uint64_t seed = 0;
  long workers = 1;
  std::string outdir;
};

std::string resolve_outdir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  const char* env = std::getenv("TPNG_OUTPUT_DIR");
  return env && *env ? env : ".";
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

// columns: value,count (one row per observed integer value, ascending)
void write_histogram_csv(const std::string& path, const std::map<long, long>& hist) {
  std::string body = "value,count\n";
  for (const auto& [v, c] : hist) body += std::to_string(v) + "," + std::to_string(c) + "\n";
  write_text(path, body);
}

std::map<long, long> histogram_of(const EmpiricalDistribution& d) {
  return d.histogram;
}

int emit_report(const CommonOpts& common, const std::string& command, const json& config,
                const json& metrics, bool pass, double runtime_seconds) {
  json report{{"schema_version", kSchemaVersion},
              {"command", command},
              {"config", config},
              {"metrics", metrics},
              {"pass", pass},
              {"runtime_seconds", runtime_seconds}};
  const std::string path = common.outdir + "/" + command + "-report.json";
  write_text(path, report.dump(1) + "\n");
  std::printf("%s: %s (%.2fs, report %s)\n", command.c_str(), pass ? "pass" : "FAIL",
              runtime_seconds, path.c_str());
  return pass ? 0 : 3;
}

json common_config(const CommonOpts& c) {
  return {{"seed", c.seed}, {"workers", c.workers}, {"output_dir", c.outdir}};
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

// ---------------------------------------------------------------- simulate-png

struct PngOpts {
  double chi = 1, eta = 1, theta = 1, t = 0.5;
  double intensity = -1;  // <0 means theta^2
  long samples = 10000, grid = 8;
};

int run_simulate_png(const CommonOpts& common, const PngOpts& o) {
  Timer timer;
  const double intensity = o.intensity < 0 ? o.theta * o.theta : o.intensity;
  EmpiricalDistribution corner;
  double nucleations = 0;
  for (long k = 0; k < o.samples; ++k) {
    const RayDiagram d = sample_png(o.chi, o.eta, intensity, o.t, derive_seed(common.seed, k));
    corner.add_count(png_height(d, o.chi, o.eta));
    nucleations += static_cast<double>(d.nucleations.size()) / static_cast<double>(o.samples);
  }
  const RayDiagram first = sample_png(o.chi, o.eta, intensity, o.t, derive_seed(common.seed, 0));
  write_text(common.outdir + "/simulate-png-grid.csv", height_grid_csv(first, o.grid, o.grid));
  write_histogram_csv(common.outdir + "/simulate-png-histogram.csv", histogram_of(corner));
  const auto m = corner.moments();
  json config = common_config(common);
  config.update({{"chi", o.chi}, {"eta", o.eta}, {"theta", o.theta}, {"t", o.t},
                 {"intensity", intensity}, {"samples", o.samples}, {"grid", o.grid}});
  json metrics{{"corner_mean", m.mean},         {"corner_mean_se", m.mean_se},
               {"corner_variance", m.variance}, {"corner_skewness", m.skewness},
               {"mean_nucleations", nucleations}};
  return emit_report(common, "simulate-png", config, metrics, true, timer.seconds());
}

// ------------------------------------------------------------ simulate-lattice

struct LatticeOpts {
  std::string model = "fused";
  std::vector<double> u{0.2, 0.3};
  std::vector<long> J{2, 3};
  std::vector<double> xi{1.0, 2.0};
  std::vector<double> s{-0.5, -0.3};
  std::string boundary = "jstep";
  double t = 0.5;
  double eps = 0.02, theta = 1.0;
  long size = 50;
  long samples = 2000;
};

int run_simulate_lattice(const CommonOpts& common, const LatticeOpts& o) {
  Timer timer;
  EmpiricalDistribution corner;
  json config = common_config(common);
  if (o.model == "fused") {
    if (o.u.size() != o.J.size() || o.xi.size() != o.s.size() || o.u.empty() || o.xi.empty())
      throw std::invalid_argument("simulate-lattice: row and column parameter lists must pair up");
    std::vector<FusedRow> rows;
    for (std::size_t i = 0; i < o.u.size(); ++i) rows.push_back(FusedRow{o.u[i], o.J[i]});
    std::vector<FusedCol> cols;
    for (std::size_t i = 0; i < o.xi.size(); ++i) cols.push_back(FusedCol{o.xi[i], o.s[i]});
    BoundaryData bd = BoundaryData::empty_boundary();
    if (o.boundary == "step") bd = BoundaryData::step_boundary();
    else if (o.boundary == "jstep") bd = BoundaryData::jstep_boundary(o.J);
    else if (o.boundary != "empty")
      throw std::invalid_argument("simulate-lattice: boundary must be empty|step|jstep");
    const long X = static_cast<long>(cols.size()), Y = static_cast<long>(rows.size());
    for (long k = 0; k < o.samples; ++k)
      corner.add_count(
          sample_fused(rows, cols, o.t, bd, derive_seed(common.seed, k)).height_at(X, Y));
    config.update({{"model", o.model}, {"u", o.u}, {"J", o.J}, {"xi", o.xi}, {"s", o.s},
                   {"boundary", o.boundary}, {"t", o.t}, {"samples", o.samples}});
  } else if (o.model == "phi") {
    for (long k = 0; k < o.samples; ++k)
      corner.add_count(sample_phi_model(o.eps, o.theta, o.t, o.size, o.size,
                                        derive_seed(common.seed, k))
                           .height_at(o.size, o.size));
    config.update({{"model", o.model}, {"eps", o.eps}, {"theta", o.theta}, {"size", o.size},
                   {"t", o.t}, {"samples", o.samples}});
  } else {
    throw std::invalid_argument("simulate-lattice: model must be fused|phi");
  }
  write_histogram_csv(common.outdir + "/simulate-lattice-histogram.csv", histogram_of(corner));
  const auto m = corner.moments();
  json metrics{{"corner_mean", m.mean},
               {"corner_mean_se", m.mean_se},
               {"corner_variance", m.variance},
               {"corner_skewness", m.skewness}};
  return emit_report(common, "simulate-lattice", config, metrics, true, timer.seconds());
}

// ------------------------------------------------------------------- patience

struct PatienceOpts {
  double t = 0, theta2 = 4;
  long samples = 100000;
};

int run_patience(const CommonOpts& common, const PatienceOpts& o) {
  Timer timer;
  EmpiricalDistribution piles;
  for (long k = 0; k < o.samples; ++k)
    piles.add_count(poissonized_pile_count(o.theta2, o.t, derive_seed(common.seed, k)));
  write_histogram_csv(common.outdir + "/patience-histogram.csv", histogram_of(piles));
  const auto m = piles.moments();
  json config = common_config(common);
  config.update({{"t", o.t}, {"theta2", o.theta2}, {"samples", o.samples}});
  json metrics{{"pile_mean", m.mean}, {"pile_mean_se", m.mean_se},
               {"pile_variance", m.variance}};
  return emit_report(common, "patience", config, metrics, true, timer.seconds());
}

// -------------------------------------------------------------- verify-weights

int run_verify_weights(const CommonOpts& common) {
  Timer timer;
  // exact row stochasticity on a small grid
  long rows = 0;
  bool stochastic = true;
  for (const Rational& t : {Rational(1, 4), Rational(1, 2), Rational(3, 4)})
    for (long J : {1L, 2L, 3L})
      for (const Rational& s : {Rational(4, 9), Rational(-1, 2), Rational(10000)}) {
        FusedParams<Rational> p{Rational(3, 5), J, s, t};
        for (long i1 = 0; i1 <= 4; ++i1)
          for (long j1 = 0; i1 + j1 <= 5 && j1 <= J; ++j1) {
            Rational sum(0);
            for (long i2 = 0; i2 <= i1 + j1; ++i2)
              sum += fused_weight(p, ArrowConfig{i1, j1, i2, i1 + j1 - i2});
            stochastic = stochastic && sum == Rational(1);
            ++rows;
          }
      }
  // deep-column degenerations approach their limit kernels
  const double t = 0.5, A = 2.0;
  auto limit_gap = [&](long J, double s, bool deep_spin) {
    double worst = 0;
    for (long i1 = 0; i1 <= 3; ++i1)
      for (long h1 = 0; h1 <= 3; ++h1)
        for (long i2 = 0; i2 <= 3; ++i2) {
          const long h2 = i2 - i1 + h1;
          if (h2 < 0 || h2 > 3) continue;
          const double u = deep_spin ? A * s * std::pow(t, -static_cast<double>(J))
                                     : -A / (s * std::pow(t, static_cast<double>(J)));
          FusedParams<long double> p{static_cast<long double>(u), J,
                                     static_cast<long double>(s), static_cast<long double>(t)};
          const double f =
              static_cast<double>(fused_weight(p, ArrowConfig{i1, J - h1, i2, J - h2}));
          const double g = deep_spin ? psi_weight(A, i1, h1, i2, h2, t)
                                     : theta_weight(A, i1, h1, i2, h2, t);
          worst = std::max(worst, std::abs(f - g));
        }
    return worst;
  };
  bool monotone = true;
  double prev_psi = 1e9, prev_theta = 1e9;
  for (long J : {10L, 20L, 30L, 40L}) {
    const double gp = limit_gap(J, 1e8, true), gt = limit_gap(J, 1e-8, false);
    monotone = monotone && gp < prev_psi && gt < prev_theta;
    prev_psi = gp;
    prev_theta = gt;
  }
  const double worst_gap = std::max(prev_psi, prev_theta);
  const bool pass = stochastic && monotone && worst_gap <= 1e-6;
  json metrics{{"stochastic_rows", rows},
               {"stochastic", stochastic},
               {"limit_gap_at_J40", worst_gap},
               {"limit_gap_monotone", monotone}};
  return emit_report(common, "verify-weights", common_config(common), metrics, pass,
                     timer.seconds());
}

// -------------------------------------------------------------- verify-detform

struct DetformOpts {
  long n = 2, trials = 20, cutoff = 45;
};

int run_verify_detform(const CommonOpts& common, const DetformOpts& o) {
  Timer timer;
  if (o.n < 1 || o.n > 6) throw std::invalid_argument("verify-detform: need 1 <= n <= 6");
  if (o.trials < 1) throw std::invalid_argument("verify-detform: need at least one trial");
  RngStream draw(common.seed, 0);
  auto alphabet = [&](long n) {
    std::vector<Rational> v;
    while (static_cast<long>(v.size()) < n) {
      Rational c(1 + static_cast<long>(draw.unit() * 98), 140);
      if (std::find(v.begin(), v.end(), c) == v.end()) v.push_back(c);
    }
    return v;
  };
  const std::array<Rational, 3> ts{Rational(0), Rational(1, 3), Rational(2, 3)};
  std::string csv = "trial,t,k,determinant_matches,expansion_diff,expansion_tail\n";
  bool pass = true;
  double worst_diff = 0, worst_tail = 0;
  for (long d = 0; d < o.trials; ++d) {
    HybridParams<Rational> p{alphabet(o.n), alphabet(o.n), (d / 9) % 3, ts[(d / 3) % 3]};
    const Rational brute = z_bruteforce(p);
    const bool det_ok = brute == z_determinant(p);
    const auto exp = z_schur_expansion(p, o.cutoff);
    const double diff = std::abs(scalar_to_double(exp.value - brute));
    pass = pass && det_ok && diff <= exp.tail + 1e-12;
    worst_diff = std::max(worst_diff, diff);
    worst_tail = std::max(worst_tail, exp.tail);
    csv += std::to_string(d) + "," + p.t.str() + "," + std::to_string(p.k) + "," +
           (det_ok ? "1" : "0") + "," + std::to_string(diff) + "," + std::to_string(exp.tail) +
           "\n";
  }
  write_text(common.outdir + "/verify-detform-trials.csv", csv);
  json config = common_config(common);
  config.update({{"n", o.n}, {"trials", o.trials}, {"cutoff", o.cutoff}});
  json metrics{{"worst_expansion_diff", worst_diff}, {"worst_expansion_tail", worst_tail}};
  return emit_report(common, "verify-detform", config, metrics, pass, timer.seconds());
}

// ------------------------------------------------------------- verify-identity

struct IdentityOpts {
  double t = 0.3, zeta = 0.5, chi = 1, eta = 1, theta = 1;
  long samples = 100000;
  double max_se = 4;
};

int run_verify_identity(const CommonOpts& common, const IdentityOpts& o) {
  Timer timer;
  Specialization r1, r2;
  r1.gamma = o.eta * o.theta;
  r2.gamma = o.chi * o.theta / (1 - o.t);
  ObservableValue rhs{};
  long budget = 0;
  for (long b = 20; b <= 80; b += 10) {
    budget = b;
    rhs = schur_observable_rhs(r1, r2, o.zeta, o.t, ObservableMode::truncated_exact, b);
    if (rhs.error_bound < 1e-8) break;
  }
  EmpiricalDistribution corner;
  const auto mc = estimate(
      [&](std::uint64_t s) {
        const long h =
            png_height(sample_png(o.chi, o.eta, o.theta * o.theta, o.t, s), o.chi, o.eta);
        return h;
      },
      [&](long h) { return height_observable(h, o.zeta, o.t); }, o.samples,
      derive_seed(common.seed, 0), common.workers);
  for (long k = 0; k < o.samples; ++k)
    corner.add_count(png_height(
        sample_png(o.chi, o.eta, o.theta * o.theta, o.t, derive_seed(derive_seed(common.seed, 0), k)),
        o.chi, o.eta));
  write_histogram_csv(common.outdir + "/verify-identity-histogram.csv", histogram_of(corner));
  const double gap = std::abs(mc.mean - rhs.value);
  const bool pass = gap <= o.max_se * mc.se + rhs.error_bound;
  json config = common_config(common);
  config.update({{"t", o.t}, {"zeta", o.zeta}, {"chi", o.chi}, {"eta", o.eta},
                 {"theta", o.theta}, {"samples", o.samples}, {"max_se", o.max_se}});
  json metrics{{"schur_value", rhs.value}, {"schur_tail", rhs.error_bound},
               {"mc_value", mc.mean},      {"mc_se", mc.se},
               {"gap", gap},               {"gap_in_se", mc.se > 0 ? gap / mc.se : 0.0},
               {"budget", budget}};
  return emit_report(common, "verify-identity", config, metrics, pass, timer.seconds());
}

// ------------------------------------------------------------------- tw-stats

struct TwOpts {
  long N = 50, samples = 2000;
  double t = 0.5, theta = 1, x = 1, y = 1;
  double mean_tol = 0;  // 0 disables the verdict
};

int run_tw_stats(const CommonOpts& common, const TwOpts& o) {
  Timer timer;
  const TwReference ref = tw_reference();
  EmpiricalDistribution heights, normalized_view;
  for (long k = 0; k < o.samples; ++k) {
    const long h = png_height(
        sample_png(o.x * o.N, o.y * o.N, o.theta * o.theta, o.t, derive_seed(common.seed, k)),
        o.x * o.N, o.y * o.N);
    heights.add_count(h);
    normalized_view.add_sample(tw_normalize(h, o.N, o.t, o.theta, o.x, o.y));
  }
  write_histogram_csv(common.outdir + "/tw-stats-histogram.csv", histogram_of(heights));
  std::string csv = "s,cdf\n";
  for (std::size_t i = 0; i < ref.s.size(); ++i)
    csv += std::to_string(ref.s[i]) + "," + std::to_string(ref.cdf[i]) + "\n";
  write_text(common.outdir + "/tw-stats-reference.csv", csv);
  const auto m = normalized_view.moments();
  const double mean_gap = std::abs(m.mean - ref.mean);
  const bool pass = o.mean_tol <= 0 || mean_gap <= o.mean_tol;
  json config = common_config(common);
  config.update({{"N", o.N}, {"t", o.t}, {"theta", o.theta}, {"x", o.x}, {"y", o.y},
                 {"samples", o.samples}, {"mean_tol", o.mean_tol}});
  json metrics{{"normalized_mean", m.mean},         {"normalized_mean_se", m.mean_se},
               {"normalized_variance", m.variance}, {"normalized_skewness", m.skewness},
               {"reference_mean", ref.mean},        {"reference_variance", ref.variance},
               {"reference_skewness", ref.skewness}, {"mean_gap", mean_gap}};
  return emit_report(common, "tw-stats", config, metrics, pass, timer.seconds());
}

// ---------------------------------------------------------------- kpz-scaling

struct KpzOpts {
  double eps = 0.2, chi = 0.1, eta = 0.1;
  std::vector<double> zeta0{0.5, 1.0};
  long samples = 20000;
  double max_se = 4;
};

double conjugate_side_product(const Partition& la, double zeta, double t) {
  const long l1 = la.parts.empty() ? 0 : la.parts[0];
  double prod = 1;
  for (long j = 1; j <= l1; ++j) {
    long conj = 0;
    for (long p : la.parts)
      if (p >= j) ++conj;
    prod /= 1 + zeta * std::pow(t, static_cast<double>(j - conj - 1));
  }
  return prod / qpochhammer(-zeta * std::pow(t, static_cast<double>(l1)), t, inf);
}

// Fixed-step scaling check: the q-deformed corner integrand equals the
// partition-side product at every step size, and is the verification target.
// The exponential functional it converges to as the step vanishes is also
// measured on the same draws; its distance is reported, not gated on.
int run_kpz_scaling(const CommonOpts& common, const KpzOpts& o) {
  Timer timer;
  if (!(o.eps > 0)) throw std::invalid_argument("kpz-scaling: need eps > 0");
  const double t = std::exp(-o.eps), theta = std::pow(o.eps, -3.0);
  const double T = 2 * std::sqrt(o.chi * o.eta);
  const double intensity = (1 - t) * theta * theta;
  const double xi = o.chi * o.eta * theta * theta;
  auto corner = [&](std::uint64_t s) {
    return png_height(sample_png(o.chi, o.eta, intensity, t, s), o.chi, o.eta);
  };
  bool pass = true;
  json rows = json::array();
  for (double z0 : o.zeta0) {
    const double zeta = z0 * std::pow(t, theta * T);
    const auto exact_lhs = estimate(
        corner, [&](long h) { return height_observable(h, zeta, t); }, o.samples,
        derive_seed(common.seed, 0), common.workers);
    const auto limit_lhs = estimate(
        corner,
        [&](long h) { return std::exp(-z0 * std::exp(kpz_normalize(h, o.chi, o.eta, o.eps))); },
        o.samples, derive_seed(common.seed, 0), common.workers);
    const auto rhs = estimate(
        [&](std::uint64_t s) { return plancherel_sample(xi, s); },
        [&](const Partition& la) { return conjugate_side_product(la, zeta, t); }, o.samples,
        derive_seed(common.seed, 1), common.workers);
    const double exact_gap = std::abs(exact_lhs.mean - rhs.mean) / std::hypot(exact_lhs.se, rhs.se);
    const double limit_gap = std::abs(limit_lhs.mean - rhs.mean) / std::hypot(limit_lhs.se, rhs.se);
    pass = pass && exact_gap <= o.max_se;
    rows.push_back({{"zeta0", z0},
                    {"growth_side", exact_lhs.mean},
                    {"growth_side_se", exact_lhs.se},
                    {"partition_side", rhs.mean},
                    {"partition_side_se", rhs.se},
                    {"identity_gap_in_se", exact_gap},
                    {"limit_functional", limit_lhs.mean},
                    {"limit_functional_gap_in_se", limit_gap}});
  }
  std::string csv =
      "zeta0,growth_side,partition_side,identity_gap_in_se,limit_functional_gap_in_se\n";
  for (const auto& r : rows)
    csv += std::to_string(r.at("zeta0").get<double>()) + "," +
           std::to_string(r.at("growth_side").get<double>()) + "," +
           std::to_string(r.at("partition_side").get<double>()) + "," +
           std::to_string(r.at("identity_gap_in_se").get<double>()) + "," +
           std::to_string(r.at("limit_functional_gap_in_se").get<double>()) + "\n";
  write_text(common.outdir + "/kpz-scaling-summary.csv", csv);
  json config = common_config(common);
  config.update({{"eps", o.eps}, {"chi", o.chi}, {"eta", o.eta}, {"zeta0", o.zeta0},
                 {"samples", o.samples}, {"max_se", o.max_se},
                 {"t", t}, {"theta", theta}, {"intensity", intensity}});
  return emit_report(common, "kpz-scaling", config, {{"points", rows}}, pass, timer.seconds());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"t-deformed growth laboratory"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name
  app.set_config("--config", "", "TOML config file; command-line flags override its values");
  app.footer("Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 verification failure.");

  CommonOpts common;
  std::string outdir_flag;
  app.add_option("--seed", common.seed, "root 64-bit seed; all randomness derives from it");
  app.add_option("--workers", common.workers, "replica workers; never changes results")
      ->check(CLI::PositiveNumber);
  app.add_option("--output-dir", outdir_flag,
                 "artifact directory (default: $TPNG_OUTPUT_DIR or .)");

  PngOpts png;
  auto* cmd_png = app.add_subcommand("simulate-png", "sample the continuum growth model");
  cmd_png->add_option("--chi", png.chi);
  cmd_png->add_option("--eta", png.eta);
  cmd_png->add_option("--theta", png.theta);
  cmd_png->add_option("--t", png.t);
  cmd_png->add_option("--intensity", png.intensity, "nucleation rate; defaults to theta^2");
  cmd_png->add_option("--samples", png.samples)->check(CLI::PositiveNumber);
  cmd_png->add_option("--grid", png.grid, "side of the emitted height grid")
      ->check(CLI::PositiveNumber);

  LatticeOpts lat;
  auto* cmd_lat = app.add_subcommand("simulate-lattice", "sample the lattice models");
  cmd_lat->add_option("--model", lat.model, "fused|phi");
  cmd_lat->add_option("--u", lat.u, "fused row rapidities");
  cmd_lat->add_option("--J", lat.J, "fused row widths");
  cmd_lat->add_option("--xi", lat.xi, "column rapidities");
  cmd_lat->add_option("--s", lat.s, "column spins");
  cmd_lat->add_option("--boundary", lat.boundary, "empty|step|jstep");
  cmd_lat->add_option("--t", lat.t);
  cmd_lat->add_option("--eps", lat.eps, "phi model step");
  cmd_lat->add_option("--theta", lat.theta, "phi model intensity parameter");
  cmd_lat->add_option("--size", lat.size, "phi model window side")->check(CLI::PositiveNumber);
  cmd_lat->add_option("--samples", lat.samples)->check(CLI::PositiveNumber);

  PatienceOpts pat;
  auto* cmd_pat = app.add_subcommand("patience", "pile counts of the sorting coupling");
  cmd_pat->add_option("--t", pat.t, "miss probability");
  cmd_pat->add_option("--theta2", pat.theta2, "mean deck size");
  cmd_pat->add_option("--samples", pat.samples)->check(CLI::PositiveNumber);

  auto* cmd_vw = app.add_subcommand("verify-weights",
                                    "row stochasticity and deep-column limit checks");

  DetformOpts det;
  auto* cmd_vd = app.add_subcommand("verify-detform",
                                    "exact window enumeration against its closed forms");
  cmd_vd->add_option("--n", det.n, "alphabet size (window side)");
  cmd_vd->add_option("--trials", det.trials);
  cmd_vd->add_option("--cutoff", det.cutoff)->check(CLI::PositiveNumber);

  IdentityOpts ident;
  auto* cmd_vi = app.add_subcommand("verify-identity",
                                    "corner observable against its partition-side value");
  cmd_vi->add_option("--t", ident.t);
  cmd_vi->add_option("--zeta", ident.zeta);
  cmd_vi->add_option("--chi", ident.chi);
  cmd_vi->add_option("--eta", ident.eta);
  cmd_vi->add_option("--theta", ident.theta);
  cmd_vi->add_option("--samples", ident.samples)->check(CLI::PositiveNumber);
  cmd_vi->add_option("--max-se", ident.max_se);

  TwOpts tw;
  auto* cmd_tw = app.add_subcommand("tw-stats", "deep-window statistics vs the reference law");
  cmd_tw->add_option("--N", tw.N)->check(CLI::PositiveNumber);
  cmd_tw->add_option("--t", tw.t);
  cmd_tw->add_option("--theta", tw.theta);
  cmd_tw->add_option("--x", tw.x);
  cmd_tw->add_option("--y", tw.y);
  cmd_tw->add_option("--samples", tw.samples)->check(CLI::PositiveNumber);
  cmd_tw->add_option("--mean-tol", tw.mean_tol, "gate |mean gap| when positive");

  KpzOpts kpz;
  auto* cmd_kpz = app.add_subcommand("kpz-scaling", "fixed-step shock frame identity check");
  cmd_kpz->add_option("--eps", kpz.eps);
  cmd_kpz->add_option("--chi", kpz.chi);
  cmd_kpz->add_option("--eta", kpz.eta);
  cmd_kpz->add_option("--zeta0", kpz.zeta0);
  cmd_kpz->add_option("--samples", kpz.samples)->check(CLI::PositiveNumber);
  cmd_kpz->add_option("--max-se", kpz.max_se);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    common.outdir = resolve_outdir(outdir_flag);
    std::filesystem::create_directories(common.outdir);
    if (*cmd_png) return run_simulate_png(common, png);
    if (*cmd_lat) return run_simulate_lattice(common, lat);
    if (*cmd_pat) return run_patience(common, pat);
    if (*cmd_vw) return run_verify_weights(common);
    if (*cmd_vd) return run_verify_detform(common, det);
    if (*cmd_vi) return run_verify_identity(common, ident);
    if (*cmd_tw) return run_tw_stats(common, tw);
    if (*cmd_kpz) return run_kpz_scaling(common, kpz);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
