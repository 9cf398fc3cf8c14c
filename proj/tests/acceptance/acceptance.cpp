// Acceptance gate. Runs the thirteen desk-scale checks that tie the samplers,
// the exact enumerators, and the symmetric-function side together, printing
// one pass/fail line per criterion. Tolerances, seeds, and runtime budgets
// are pinned here on purpose; the unit suites cover the fine-grained cases.
// Exit status is 0 only if every criterion passes.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

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

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// criterion 1: the fused row weights sum to one, exactly, over a grid of
// deformation, row width, and column spin regimes
bool c01_row_stochasticity(std::string& detail) {
  const std::array<Rational, 3> ts{Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  const std::array<long, 3> js{1, 2, 4};
  const std::array<Rational, 3> ss{Rational(4, 9), Rational(-1, 2), Rational(10000)};
  long rows = 0;
  for (const Rational& t : ts)
    for (long J : js)
      for (const Rational& s : ss) {
        FusedParams<Rational> p{Rational(3, 5), J, s, t};
        for (long i1 = 0; i1 + 0 <= 6; ++i1)
          for (long j1 = 0; i1 + j1 <= 6 && j1 <= J; ++j1) {
            Rational sum(0);
            for (long i2 = 0; i2 <= i1 + j1; ++i2)
              sum += fused_weight(p, ArrowConfig{i1, j1, i2, i1 + j1 - i2});
            if (sum != Rational(1)) {
              detail = "row sum off at J=" + std::to_string(J);
              return false;
            }
            ++rows;
          }
      }
  detail = std::to_string(rows) + " rows sum to 1 exactly (tolerance 1e-10)";
  return true;
}

double column_limit_gap(long J, double s, double A, double t, bool deep_spin) {
  double worst = 0;
  for (long i1 = 0; i1 <= 3; ++i1)
    for (long h1 = 0; h1 <= 3 && h1 <= J; ++h1)
      for (long i2 = 0; i2 <= 3; ++i2) {
        const long h2 = i2 - i1 + h1;
        if (h2 < 0 || h2 > 3 || h2 > J) continue;
        const double u = deep_spin ? A * s * std::pow(t, -static_cast<double>(J))
                                   : -A / (s * std::pow(t, static_cast<double>(J)));
        FusedParams<long double> p{static_cast<long double>(u), J, static_cast<long double>(s),
                                   static_cast<long double>(t)};
        const double f = static_cast<double>(fused_weight(p, ArrowConfig{i1, J - h1, i2, J - h2}));
        const double g = deep_spin ? psi_weight(A, i1, h1, i2, h2, t)
                                   : theta_weight(A, i1, h1, i2, h2, t);
        worst = std::max(worst, std::abs(f - g));
      }
  return worst;
}

// criterion 2: deep-column degenerations of the fused weight reach their two
// limit kernels, with the gap shrinking monotonically in the row width
bool c02_column_limits(std::string& detail) {
  const double t = 0.5, A = 2.0;
  const std::array<long, 4> js{10, 20, 30, 40};
  std::array<double, 4> gp{}, gt{};
  for (std::size_t i = 0; i < js.size(); ++i) {
    gp[i] = column_limit_gap(js[i], 1e8, A, t, true);
    gt[i] = column_limit_gap(js[i], 1e-8, A, t, false);
  }
  bool mono = true;
  for (std::size_t i = 1; i < js.size(); ++i)
    mono = mono && gp[i] < gp[i - 1] && gt[i] < gt[i - 1];
  const bool ok = mono && gp[3] <= 1e-6 && gt[3] <= 1e-6;
  detail = "gaps at J=40: " + fmt(gp[3]) + " / " + fmt(gt[3]) +
           " (tolerance 1e-6), monotone over J=10..40: " + (mono ? "yes" : "no");
  return ok;
}

// criterion 3: residuals of the small-step expansions scale at their stated
// orders; each ratio across eps = 1e-2 -> 1e-3 must sit within a factor 3 of
// the predicted power of ten
bool c03_residual_orders(std::string& detail) {
  const double t = 0.5, theta = 1.0, beta = 1.0;
  const long i = 2;
  auto residuals = [&](double eps) {
    const double A = t / (1 - t) * std::pow(eps * theta, -2.0);
    const double B = t / (1 - t) / (eps * theta * beta);
    std::vector<std::pair<double, int>> r;  // residual, stated order
    r.push_back({1 - psi_weight(A, 0, 0, 0, 0, t), 2});
    r.push_back({std::abs(psi_weight(A, 0, 0, 1, 1, t) - eps * eps * theta * theta), 4});
    double s = 0;
    for (long k = 2; k <= 10; ++k) s += std::abs(psi_weight(A, 0, 0, k, k, t));
    r.push_back({s, 4});
    r.push_back({1 - psi_weight(A, 1, 0, 1, 0, t), 2});
    r.push_back({1 - psi_weight(A, 0, 1, 0, 1, t), 2});
    r.push_back({std::abs(psi_weight(A, 1, 1, 0, 0, t) - (1 - t)), 2});
    r.push_back({std::abs(psi_weight(A, 1, 1, 1, 1, t) - t), 2});
    r.push_back({1 - theta_weight(B, i, 0, i, 0, t), 1});
    r.push_back({std::abs(theta_weight(B, i, 0, i + 1, 1, t) - eps * theta * beta), 2});
    s = 0;
    for (long k = 2; k <= 10; ++k) s += theta_weight(B, i, 0, i + k, k, t);
    r.push_back({s, 2});
    r.push_back({std::abs(theta_weight(B, i, 1, i - 1, 0, t) - (1 - std::pow(t, (double)i))), 1});
    r.push_back({std::abs(theta_weight(B, i, 1, i, 1, t) - std::pow(t, (double)i)), 1});
    return r;
  };
  const auto coarse = residuals(1e-2);
  const auto fine = residuals(1e-3);
  bool ok = true;
  double worst_rel = 0;
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    if (coarse[j].first < 1e-12) continue;  // already at machine precision
    const double ratio = coarse[j].first / fine[j].first;
    const double predicted = std::pow(10.0, coarse[j].second);
    const double rel = std::max(ratio / predicted, predicted / ratio);
    worst_rel = std::max(worst_rel, rel);
    ok = ok && rel <= 3.0;
  }
  detail = std::to_string(coarse.size()) + " residuals, worst ratio off by x" + fmt(worst_rel) +
           " (allowed x3)";
  return ok;
}

// criterion 4: enumeration, closed determinant, and truncated expansion of
// the quadrant partition function coincide, plus its structural properties
bool c04_triple_equality(std::string& detail) {
  RngStream draw(0xacc40000dd17UL, 0);
  const std::array<Rational, 3> ts{Rational(0), Rational(1, 3), Rational(2, 3)};
  auto alphabet = [&](long n) {
    std::vector<Rational> v;
    while (static_cast<long>(v.size()) < n) {
      Rational c(1 + static_cast<long>(draw.unit() * 98), 140);
      if (std::find(v.begin(), v.end(), c) == v.end()) v.push_back(c);
    }
    return v;
  };
  double worst_tail = 0, worst_diff = 0;
  for (long d = 0; d < 20; ++d) {
    HybridParams<Rational> p{alphabet(1 + d % 3), alphabet(1 + d % 3), (d / 9) % 3,
                             ts[(d / 3) % 3]};
    const Rational brute = z_bruteforce(p);
    if (brute != z_determinant(p)) {
      detail = "determinant mismatch at draw " + std::to_string(d);
      return false;
    }
    const auto exp = z_schur_expansion(p, 45);
    const double diff = std::abs(scalar_to_double(exp.value - brute));
    worst_tail = std::max(worst_tail, exp.tail);
    worst_diff = std::max(worst_diff, diff);
    if (diff > exp.tail + 1e-12) {
      detail = "expansion outside reported tail at draw " + std::to_string(d);
      return false;
    }
  }

  // structural properties: alphabet symmetry, reciprocal-rapidity reduction,
  // zero column alphabet, the one-line closed form, and trailing zeros
  {
    HybridParams<Rational> p{{Rational(1, 5), Rational(2, 7)},
                             {Rational(3, 10), Rational(1, 2)},
                             1,
                             Rational(1, 3)};
    HybridParams<Rational> q = p;
    std::swap(q.x[0], q.x[1]);
    std::swap(q.y[0], q.y[1]);
    if (z_bruteforce(p) != z_bruteforce(q)) {
      detail = "alphabet symmetry broken";
      return false;
    }
  }
  {
    // x2 * y2 = 1 removes one line from the window
    HybridParams<Rational> p2{{Rational(1, 4), Rational(3, 2)},
                              {Rational(1, 5), Rational(2, 3)},
                              1,
                              Rational(1, 3)};
    HybridParams<Rational> p1{{Rational(1, 4)}, {Rational(1, 5)}, 1, Rational(1, 3)};
    if (z_bruteforce(p2) != Rational(2, 3) * z_bruteforce(p1)) {
      detail = "reciprocal-rapidity reduction broken";
      return false;
    }
  }
  {
    // zero x alphabet: every row passes through and Z collapses to the
    // y-normalized full tower
    HybridParams<Rational> p{{Rational(0), Rational(0), Rational(0)},
                             {Rational(1, 5), Rational(1, 3), Rational(2, 5)},
                             2,
                             Rational(1, 2)};
    const Rational want = Rational(1, 5) * Rational(1, 3) * Rational(2, 5) *
                          tower_factor(Rational(1, 2), 2L, 3L);
    if (z_bruteforce(p) != want) {
      detail = "zero-alphabet collapse broken";
      return false;
    }
  }
  {
    // one line: Z = y (1 - t^{k+1} - t (1 - t^k) x y) / (1 - t x y)
    const Rational x(1, 3), y(2, 5), t(1, 3);
    for (long k = 0; k <= 2; ++k) {
      HybridParams<Rational> p{{x}, {y}, k, t};
      const Rational tk = scalar_pow(t, k);
      const Rational want =
          y * (Rational(1) - t * tk - t * (Rational(1) - tk) * x * y) / (Rational(1) - t * x * y);
      if (z_bruteforce(p) != want || z_determinant(p) != want) {
        detail = "one-line closed form broken at k=" + std::to_string(k);
        return false;
      }
    }
  }
  {
    // a trailing zero column leaves the remaining window untouched
    const std::vector<Rational> x{Rational(1, 5), Rational(2, 7), Rational(1, 2)};
    const auto full = quadrant_height_pmf(x, {Rational(1, 4), Rational(1, 3), Rational(0)},
                                          Rational(1, 2));
    const auto cut = quadrant_height_pmf(x, {Rational(1, 4), Rational(1, 3)}, Rational(1, 2));
    if (full != cut) {
      detail = "trailing-zero reduction broken";
      return false;
    }
  }
  detail = "20 draws exact, expansion diff <= tail (worst " + fmt(worst_diff) + " <= " +
           fmt(worst_tail) + "), 5 structural properties hold";
  return true;
}

// criterion 5: the zeta-deformed expectation of the exact window enumeration
// equals its symmetric-function evaluation
bool c05_final_match(std::string& detail) {
  const std::vector<Rational> x{Rational(1, 5), Rational(2, 5)};
  const std::vector<Rational> y{Rational(3, 10), Rational(1, 2)};
  const Rational t(1, 2);
  double worst = 0, worst_tail = 0;
  for (const Rational& zeta : {Rational(1, 10), Rational(7, 10)}) {
    const Rational lhs = sixv_zeta_expectation(x, y, t, zeta);
    const auto rhs = z_schur_zeta(x, y, zeta, t, 60);
    worst = std::max(worst, std::abs(scalar_to_double(lhs - rhs.value)));
    worst_tail = std::max(worst_tail, rhs.tail);
  }
  detail = "worst |diff| " + fmt(worst) + " (tolerance 1e-10, tail " + fmt(worst_tail) + ")";
  return worst <= 1e-10 && worst_tail <= 1e-10;
}

// criterion 6: Monte Carlo of the corner height integrand matches the
// truncated-exact symmetric-function value within four standard errors
bool c06_corner_observable(std::string& detail) {
  const double theta = 1.0, zeta = 0.5;
  const long n = 100000;
  std::ostringstream os;
  bool ok = true;
  for (double t : {0.3, 0.7}) {
    Specialization r1, r2;
    r1.gamma = theta;
    r2.gamma = theta / (1 - t);
    const auto rhs = schur_observable_rhs(r1, r2, zeta, t, ObservableMode::truncated_exact, 30);
    if (rhs.error_bound >= 1e-8) {
      detail = "tail not certified below 1e-8";
      return false;
    }
    const auto mc = estimate(
        [&](std::uint64_t s) { return png_height(sample_png(1, 1, theta * theta, t, s), 1, 1); },
        [&](long h) { return height_observable(h, zeta, t); }, n, 0xacc600 + (t > 0.5));
    const double sigmas = std::abs(mc.mean - rhs.value) / mc.se;
    ok = ok && sigmas <= 4.0;
    os << " t=" << t << ": " << fmt(sigmas) << " se";
  }
  detail = "gap" + os.str() + " (allowed 4 se, tails < 1e-8)";
  return ok;
}

// criterion 7: the corner height law reconstructed from symmetric-function
// values matches the sampled histogram inside the multinomial noise envelope
bool c07_law_reconstruction(std::string& detail) {
  const double t = 0.5, theta = 1.0;
  const long kmax = 8, n = 100000;
  Specialization r1, r2;
  r1.gamma = theta;
  r2.gamma = theta / (1 - t);
  const HeightLaw law = schur_height_law(r1, r2, t, kmax, 30);
  std::map<long, long> hist;
  for (long k = 0; k < n; ++k)
    hist[png_height(sample_png(1, 1, theta * theta, t, derive_seed(0xacc700, k)), 1, 1)]++;
  double tv = 0, envelope = law.residual + (kmax + 1) * law.value_error;
  for (long h = 0; h <= kmax; ++h) {
    const double p = law.pmf[h];
    const double q = hist.count(h) ? static_cast<double>(hist.at(h)) / n : 0.0;
    tv += 0.5 * std::abs(p - q);
    envelope += 2 * std::sqrt(p * (1 - p) / n);
  }
  for (const auto& [h, c] : hist)
    if (h > kmax) tv += 0.5 * static_cast<double>(c) / n;
  detail = "tv " + fmt(tv) + " vs envelope " + fmt(envelope) + ", reconstruction residual " +
           fmt(law.residual);
  return tv <= envelope;
}

// criterion 8: pile counts of the poissonized sorting coupling follow the
// corner height law
bool c08_pile_coupling(std::string& detail) {
  const double theta2 = 4.0;
  const long n = 100000;
  std::ostringstream os;
  bool ok = true;
  for (double t : {0.0, 0.5}) {
    EmpiricalDistribution piles, heights;
    for (long k = 0; k < n; ++k) {
      piles.add_count(poissonized_pile_count(theta2, t, derive_seed(0xacc801, k)));
      heights.add_count(
          png_height(sample_png(1, 1, theta2, t, derive_seed(0xacc802 + long(t * 10), k)), 1, 1));
    }
    const auto cmp = compare_laws(piles, heights);
    ok = ok && cmp.pass;
    os << " t=" << t << ": p=" << fmt(cmp.p_value);
  }
  detail = "chi-square" + os.str() + " (significance 1e-3)";
  return ok;
}

// criterion 9: the discrete growth tiles at a small step reproduce the
// continuum corner law in total variation
bool c09_tile_approximation(std::string& detail) {
  const double eps = 0.02, theta = 1.0, t = 0.5;
  const long L = 50, n = 100000;
  EmpiricalDistribution discrete, continuum;
  for (long k = 0; k < n; ++k) {
    discrete.add_count(sample_phi_model(eps, theta, t, L, L, derive_seed(0xacc901, k))
                           .height_at(L, L));
    continuum.add_count(
        png_height(sample_png(1, 1, theta * theta, t, derive_seed(0xacc902, k)), 1, 1));
  }
  const double tv = compare_laws(discrete, continuum).tv;
  detail = "tv " + fmt(tv) + " (tolerance 0.05)";
  return tv <= 0.05;
}

// criterion 10: fusing geometric row bundles leaves the joint height law at
// two window points unchanged
bool c10_fusion_invariance(std::string& detail) {
  const double t = 0.5;
  const std::vector<double> u{0.2, 0.3};
  const std::vector<long> J{2, 3};
  const FusionMap fm = fuse_params(u, J, t);
  const std::vector<FusedRow> frows{FusedRow{u[0], J[0]}, FusedRow{u[1], J[1]}};
  std::vector<FusedRow> prows;
  for (double v : fm.v) prows.push_back(FusedRow{v, 1});
  const std::vector<FusedCol> cols{FusedCol{1.0, -0.5}, FusedCol{2.0, -0.3}};
  const BoundaryData fb = BoundaryData::jstep_boundary({J[0], J[1]});
  const BoundaryData pb = BoundaryData::step_boundary();
  const long n = 100000;
  EmpiricalDistribution fused, prefused;
  for (long k = 0; k < n; ++k) {
    QuadrantEnsemble ef = sample_fused(frows, cols, t, fb, derive_seed(0xacc1001, k));
    fused.add_count(100 * ef.height_at(1, 1) + ef.height_at(2, 2));
    QuadrantEnsemble ep = sample_fused(prows, cols, t, pb, derive_seed(0xacc1002, k));
    prefused.add_count(100 * ep.height_at(1, 2) + ep.height_at(2, 5));
  }
  const auto cmp = compare_laws(fused, prefused);
  detail = "joint-law chi-square p=" + fmt(cmp.p_value) + " (significance 1e-3)";
  return cmp.pass;
}

// criterion 11: centered and scaled corner heights in a deep window against
// the reference law's mean and skewness
bool c11_deep_window(std::string& detail) {
  const double t = 0.5, theta = 1.0;
  const long N = 50, n = 20000;
  EmpiricalDistribution d;
  for (long k = 0; k < n; ++k) {
    const long h = png_height(sample_png(N, N, theta * theta, t, derive_seed(0xacc1101, k)), N, N);
    d.add_sample(tw_normalize(h, N, t, theta, 1, 1));
  }
  const auto m = d.moments();
  const bool mean_ok = std::abs(m.mean - (-1.7711)) <= 0.15;
  const bool skew_ok = std::abs(m.skewness - 0.2241) <= 0.10;
  detail = "mean " + fmt(m.mean) + " vs -1.7711 +- 0.15 (se " + fmt(m.mean_se) + "), skewness " +
           fmt(m.skewness) + " vs 0.2241 +- 0.10 (se " + fmt(m.skewness_se) + ")";
  return mean_ok && skew_ok;
}

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

// criterion 12: the shock-frame exponential functional of the growth height
// against the partition-side product, at a fixed step size. The two sides
// coincide only in the vanishing-step limit; the gate evaluates the fixed
// step 0.2 literally, and the info line separates the step error from the
// sampling error by also running the step-exact integrand on the same draws.
bool c12_shock_frame(std::string& detail) {
  const double eps = 0.2, chi = 0.1, eta = 0.1;
  const double t = std::exp(-eps), theta = std::pow(eps, -3.0);
  const double T = 2 * std::sqrt(chi * eta);
  const double intensity = (1 - t) * theta * theta;
  const double xi = chi * eta * theta * theta;
  const long n = 100000;
  auto corner = [&](std::uint64_t s) {
    return png_height(sample_png(chi, eta, intensity, t, s), chi, eta);
  };
  std::ostringstream os, info;
  bool ok = true;
  for (double zeta0 : {0.5, 1.0}) {
    const double zeta = zeta0 * std::pow(t, theta * T);
    const auto lhs = estimate(
        corner,
        [&](long h) { return std::exp(-zeta0 * std::exp(kpz_normalize(h, chi, eta, eps))); }, n,
        0xacc1201);
    const auto exact_side = estimate(
        corner, [&](long h) { return height_observable(h, zeta, t); }, n, 0xacc1201);
    const auto rhs = estimate([&](std::uint64_t s) { return plancherel_sample(xi, s); },
                              [&](const Partition& la) { return conjugate_side_product(la, zeta, t); },
                              n, 0xacc1202);
    const double sig = std::abs(lhs.mean - rhs.mean) / std::hypot(lhs.se, rhs.se);
    const double sig_exact =
        std::abs(exact_side.mean - rhs.mean) / std::hypot(exact_side.se, rhs.se);
    ok = ok && sig <= 4.0;
    os << " zeta0=" << zeta0 << ": " << fmt(sig) << " se";
    info << " zeta0=" << zeta0 << ": " << fmt(sig_exact) << " se";
  }
  detail = "gap" + os.str() + " (allowed 4 combined se at step 0.2)" +
           "\n    info: step-exact integrand vs partition side:" + info.str() +
           " (the remaining gap is the\n    info: fixed-step error of the exponential " +
           "functional, not a sampling effect)";
  return ok;
}

// criterion 13: window restriction leaves the corner law unchanged, and all
// samplers are deterministic functions of their seed
bool c13_restriction_determinism(std::string& detail) {
  const long n = 100000;
  EmpiricalDistribution big, direct;
  for (long k = 0; k < n; ++k) {
    big.add_count(png_height(sample_png(2, 2, 4.0, 0.5, derive_seed(0xacc1301, k)), 1, 1));
    direct.add_count(png_height(sample_png(1, 1, 4.0, 0.5, derive_seed(0xacc1302, k)), 1, 1));
  }
  const auto cmp = compare_laws(big, direct);

  bool det = diagram_json(sample_png(2, 2, 3.0, 0.5, 5)) ==
             diagram_json(sample_png(2, 2, 3.0, 0.5, 5));
  det = det && diagram_json(sample_png(2, 2, 3.0, 0.5, 5)) !=
                   diagram_json(sample_png(2, 2, 3.0, 0.5, 6));
  const std::vector<FusedRow> rows{FusedRow{0.3, 2}};
  const std::vector<FusedCol> cols{FusedCol{1.0, -0.5}};
  const QuadrantEnsemble a = sample_fused(rows, cols, 0.5, BoundaryData::jstep_boundary({2}), 9);
  const QuadrantEnsemble b = sample_fused(rows, cols, 0.5, BoundaryData::jstep_boundary({2}), 9);
  det = det && a.height_at(1, 1) == b.height_at(1, 1);
  det = det && plancherel_sample(12.0, 31).parts == plancherel_sample(12.0, 31).parts;
  det = det && poissonized_pile_count(4.0, 0.5, 77) == poissonized_pile_count(4.0, 0.5, 77);

  detail = "restriction chi-square p=" + fmt(cmp.p_value) + ", determinism " +
           (det ? "holds" : "broken");
  return cmp.pass && det;
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    double budget_s;
    bool (*run)(std::string&);
  };
  const std::array<Entry, 13> entries{{
      {"fused row stochasticity", 1, c01_row_stochasticity},
      {"deep column limits", 1, c02_column_limits},
      {"small step residual orders", 1, c03_residual_orders},
      {"quadrant triple equality", 30, c04_triple_equality},
      {"zeta-deformed final match", 5, c05_final_match},
      {"corner observable identity", 120, c06_corner_observable},
      {"corner law reconstruction", 120, c07_law_reconstruction},
      {"pile count coupling", 60, c08_pile_coupling},
      {"growth tile approximation", 300, c09_tile_approximation},
      {"row fusion invariance", 120, c10_fusion_invariance},
      {"deep window statistics", 1200, c11_deep_window},
      {"shock frame product identity", 600, c12_shock_frame},
      {"restriction and determinism", 60, c13_restriction_determinism},
  }};
  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = entries[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (sec > entries[i].budget_s) {
      ok = false;
      detail += " [over runtime budget]";
    }
    std::printf("criterion %02zu %s  %-30s %5.1fs/%-4.0fs  %s\n", i + 1, ok ? "pass" : "FAIL",
                entries[i].label, sec, entries[i].budget_s, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("%d of 13 criteria pass\n", 13 - failures);
  return failures == 0 ? 0 : 1;
}
