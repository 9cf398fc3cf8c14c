#pragma once

// Estimation and comparison harness: seeded replica means, empirical moment
// summaries with jackknife errors, distribution comparisons with
// size-aware thresholds, the corner-fluctuation reference law computed from
// the Airy-kernel Fredholm determinant, and the two normalizations used by
// the limit checks.

#include <gsl/gsl_cdf.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_airy.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tpng/linalg.hpp"
#include "tpng/rng.hpp"

namespace tpng {

struct Estimate {
  double mean = 0;
  double se = 0;
};

// Mean and standard error over n replicas. Replica i draws its seed from the
// root seed by index, and the reduction always runs in index order, so the
// result is bit-identical for every worker count.
template <class Sampler, class Functional>
Estimate estimate(Sampler&& sampler, Functional&& functional, long n, std::uint64_t seed,
                  long workers = 1) {
  if (n < 2) throw std::invalid_argument("estimate: need at least 2 replicas");
  if (workers < 1) throw std::invalid_argument("estimate: need at least 1 worker");
  auto replica = [&](long i) { return functional(sampler(derive_seed(seed, i))); };
  std::vector<double> vals;
  if (workers > 1) {
    vals.resize(n);
    std::vector<std::thread> pool;
    for (long w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (long i = w; i < n; i += workers) vals[i] = replica(i);
      });
    for (auto& th : pool) th.join();
  }
  double mean = 0, m2 = 0;
  for (long i = 0; i < n; ++i) {
    const double v = workers > 1 ? vals[i] : replica(i);
    if (!std::isfinite(v))
      throw std::runtime_error("estimate: non-finite functional value at replica seed " +
                               std::to_string(derive_seed(seed, i)));
    const double d = v - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (v - mean);
  }
  return {mean, std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n))};
}

struct MomentSummary {
  double mean = 0, mean_se = 0;
  double variance = 0, variance_se = 0;
  double skewness = 0, skewness_se = 0;
};

// Either raw real-valued samples or an integer histogram, not both at once.
struct EmpiricalDistribution {
  std::vector<double> samples;
  std::map<long, long> histogram;
  long count = 0;

  void add_sample(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("EmpiricalDistribution: non-finite sample");
    samples.push_back(v);
    ++count;
  }
  void add_count(long value, long n = 1) {
    if (n < 0) throw std::invalid_argument("EmpiricalDistribution: negative count");
    histogram[value] += n;
    count += n;
  }

  double mean() const { return moments().mean; }
  double variance() const { return moments().variance; }
  double skewness() const { return moments().skewness; }

  // Jackknife (delete one) errors computed from power sums, so histogram
  // multiplicities collapse to one pass per distinct value.
  MomentSummary moments() const {
    if (count <= 0) throw std::logic_error("EmpiricalDistribution: no data");
    if (!samples.empty() && !histogram.empty())
      throw std::logic_error("EmpiricalDistribution: mixed sample and histogram storage");
    std::vector<std::pair<double, double>> vals;  // value, multiplicity
    if (!samples.empty())
      for (double v : samples) vals.emplace_back(v, 1);
    else
      for (const auto& [v, c] : histogram) vals.emplace_back(static_cast<double>(v),
                                                             static_cast<double>(c));
    const double n = static_cast<double>(count);
    double s1 = 0, s2 = 0, s3 = 0;
    for (const auto& [v, c] : vals) {
      s1 += c * v;
      s2 += c * v * v;
      s3 += c * v * v * v;
    }
    auto stats = [](double nn, double t1, double t2, double t3) {
      const double mu = t1 / nn;
      const double m2 = t2 / nn - mu * mu;
      const double m3 = t3 / nn - 3 * mu * t2 / nn + 2 * mu * mu * mu;
      const double sk = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
      return std::array<double, 3>{mu, m2, sk};
    };
    const auto full = stats(n, s1, s2, s3);
    MomentSummary out;
    out.mean = full[0];
    out.variance = full[1];
    out.skewness = full[2];
    if (count < 2) return out;
    double q[3] = {0, 0, 0};  // sums of squared deviations of delete-one stats
    double base[3] = {0, 0, 0};
    for (const auto& [v, c] : vals) {
      const auto loo = stats(n - 1, s1 - v, s2 - v * v, s3 - v * v * v);
      for (int k = 0; k < 3; ++k) base[k] += c * loo[k];
    }
    for (int k = 0; k < 3; ++k) base[k] /= n;
    for (const auto& [v, c] : vals) {
      const auto loo = stats(n - 1, s1 - v, s2 - v * v, s3 - v * v * v);
      for (int k = 0; k < 3; ++k) q[k] += c * (loo[k] - base[k]) * (loo[k] - base[k]);
    }
    const double scale = (n - 1) / n;
    out.mean_se = std::sqrt(scale * q[0]);
    out.variance_se = std::sqrt(scale * q[1]);
    out.skewness_se = std::sqrt(scale * q[2]);
    return out;
  }
};

struct LawComparison {
  double tv = 0;
  double ks = 0;
  double chi_square = 0;
  long dof = 0;
  double p_value = 1;
  double significance = 1e-3;
  bool pass = false;

  nlohmann::json json() const {
    return {{"tv", tv},           {"ks", ks},   {"chi-square", chi_square}, {"dof", dof},
            {"p-value", p_value}, {"pass", pass}, {"significance", significance}};
  }
};

namespace detail {

inline LawComparison finish_comparison(LawComparison r, const std::vector<double>& chi_terms,
                                       long cells) {
  r.dof = cells - 1;
  for (double c : chi_terms) r.chi_square += c;
  r.p_value = r.dof >= 1 ? gsl_cdf_chisq_Q(r.chi_square, static_cast<double>(r.dof)) : 1.0;
  r.pass = r.p_value >= r.significance;
  return r;
}

}  // namespace detail

// Two-sample comparison on integer histograms: total variation and KS of the
// empirical laws plus a chi-square homogeneity decision. Sparse cells pool
// left to right until each kept cell holds at least 10 combined draws.
inline LawComparison compare_laws(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                                  double significance = 1e-3) {
  if (a.count <= 0 || b.count <= 0) throw std::invalid_argument("compare_laws: empty input");
  if (!a.samples.empty() || !b.samples.empty())
    throw std::invalid_argument("compare_laws: histogram storage required");
  const double na = a.count, nb = b.count;
  std::map<long, std::pair<double, double>> cells;
  for (const auto& [v, c] : a.histogram) cells[v].first += c;
  for (const auto& [v, c] : b.histogram) cells[v].second += c;
  LawComparison r;
  r.significance = significance;
  double ca = 0, cb = 0;
  for (const auto& [v, cnt] : cells) {
    r.tv += 0.5 * std::abs(cnt.first / na - cnt.second / nb);
    ca += cnt.first / na;
    cb += cnt.second / nb;
    r.ks = std::max(r.ks, std::abs(ca - cb));
  }
  std::vector<std::pair<double, double>> pooled;
  std::pair<double, double> acc{0, 0};
  for (const auto& [v, cnt] : cells) {
    acc.first += cnt.first;
    acc.second += cnt.second;
    if (acc.first + acc.second >= 10) {
      pooled.push_back(acc);
      acc = {0, 0};
    }
  }
  if (acc.first + acc.second > 0) {
    if (pooled.empty()) pooled.push_back(acc);
    else {
      pooled.back().first += acc.first;
      pooled.back().second += acc.second;
    }
  }
  std::vector<double> terms;
  for (const auto& [fa, fb] : pooled) {
    const double p = (fa + fb) / (na + nb);
    terms.push_back((fa - na * p) * (fa - na * p) / (na * p));
    terms.push_back((fb - nb * p) * (fb - nb * p) / (nb * p));
  }
  return detail::finish_comparison(std::move(r), terms, static_cast<long>(pooled.size()));
}

// Goodness of fit of an integer histogram against an exact pmf starting at
// `offset`; mass the pmf leaves off its listed support forms a tail cell.
inline LawComparison compare_laws(const EmpiricalDistribution& a, const std::vector<double>& pmf,
                                  long offset = 0, double significance = 1e-3) {
  if (a.count <= 0) throw std::invalid_argument("compare_laws: empty input");
  if (pmf.empty()) throw std::invalid_argument("compare_laws: empty pmf");
  if (!a.samples.empty()) throw std::invalid_argument("compare_laws: histogram storage required");
  const double n = a.count;
  double pmf_mass = 0;
  for (double p : pmf) {
    if (p < -1e-12) throw std::invalid_argument("compare_laws: negative pmf entry");
    pmf_mass += p;
  }
  const double tail_p = std::max(0.0, 1 - pmf_mass);
  const long m = static_cast<long>(pmf.size());
  std::vector<double> obs(m + 1, 0.0);  // last cell = off-support tail
  for (const auto& [v, c] : a.histogram) {
    const long idx = v - offset;
    if (idx >= 0 && idx < m) obs[idx] += c;
    else obs[m] += c;
  }
  LawComparison r;
  r.significance = significance;
  double cf = 0, ce = 0;
  for (long i = 0; i <= m; ++i) {
    const double p = i < m ? pmf[i] : tail_p;
    r.tv += 0.5 * std::abs(obs[i] / n - p);
    cf += obs[i] / n;
    ce += p;
    r.ks = std::max(r.ks, std::abs(cf - ce));
  }
  if (obs[m] > 0 && tail_p <= 0) {  // mass where the law puts none
    r.chi_square = std::numeric_limits<double>::infinity();
    r.dof = m;
    r.p_value = 0;
    r.pass = false;
    return r;
  }
  // pool cells with small expectation into their left neighbor
  std::vector<std::pair<double, double>> pooled;  // observed, expected
  std::pair<double, double> acc{0, 0};
  for (long i = 0; i <= m; ++i) {
    acc.first += obs[i];
    acc.second += (i < m ? pmf[i] : tail_p) * n;
    if (acc.second >= 5) {
      pooled.push_back(acc);
      acc = {0, 0};
    }
  }
  if (acc.second > 0 || acc.first > 0) {
    if (pooled.empty()) pooled.push_back(acc);
    else {
      pooled.back().first += acc.first;
      pooled.back().second += acc.second;
    }
  }
  std::vector<double> terms;
  for (const auto& [o, e] : pooled)
    terms.push_back(e > 0 ? (o - e) * (o - e) / e : (o > 0 ? 1e300 : 0.0));
  return detail::finish_comparison(std::move(r), terms, static_cast<long>(pooled.size()));
}

struct TwReference {
  double smin = -6, smax = 4, step = 0.025;
  long nodes = 200;
  std::vector<double> s, cdf;
  double mean = 0, variance = 0, skewness = 0;
};

namespace detail {

inline double airy_ai(double x, bool deriv) {
  gsl_sf_result res;
  const int status = deriv ? gsl_sf_airy_Ai_deriv_e(x, GSL_PREC_DOUBLE, &res)
                           : gsl_sf_airy_Ai_e(x, GSL_PREC_DOUBLE, &res);
  if (status == GSL_EUNDRFLW) return 0.0;
  if (status != 0) throw std::runtime_error("tw_reference: Airy evaluation failed");
  return res.val;
}

// Fredholm determinant of the Airy kernel on (s, upper) by Nystrom
// discretization over a Gauss-Legendre rule, symmetrized with sqrt weights.
inline double airy_fredholm_det(double s, double upper, long m,
                                gsl_integration_glfixed_table* tab) {
  std::vector<double> xs(m), ws(m), ai(m), aip(m);
  for (long i = 0; i < m; ++i) {
    gsl_integration_glfixed_point(s, upper, static_cast<std::size_t>(i), &xs[i], &ws[i], tab);
    ai[i] = airy_ai(xs[i], false);
    aip[i] = airy_ai(xs[i], true);
  }
  Matrix<double> a(m, std::vector<double>(m));
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) {
      const double k = (i == j) ? aip[i] * aip[i] - xs[i] * ai[i] * ai[i]
                                : (ai[i] * aip[j] - aip[i] * ai[j]) / (xs[i] - xs[j]);
      a[i][j] = (i == j ? 1.0 : 0.0) - std::sqrt(ws[i] * ws[j]) * k;
    }
  return matrix_det(std::move(a));
}

inline void tw_moments(TwReference& ref) {
  // midpoint Stieltjes sums plus point masses for the clipped tails
  double m1 = ref.smin * ref.cdf.front() + ref.smax * (1 - ref.cdf.back());
  double m2 = ref.smin * ref.smin * ref.cdf.front() +
              ref.smax * ref.smax * (1 - ref.cdf.back());
  double m3 = std::pow(ref.smin, 3) * ref.cdf.front() +
              std::pow(ref.smax, 3) * (1 - ref.cdf.back());
  for (std::size_t i = 0; i + 1 < ref.s.size(); ++i) {
    const double mid = 0.5 * (ref.s[i] + ref.s[i + 1]);
    const double df = ref.cdf[i + 1] - ref.cdf[i];
    m1 += mid * df;
    m2 += mid * mid * df;
    m3 += mid * mid * mid * df;
  }
  ref.mean = m1;
  ref.variance = m2 - m1 * m1;
  ref.skewness = (m3 - 3 * m1 * m2 + 2 * m1 * m1 * m1) / std::pow(ref.variance, 1.5);
}

inline std::string tw_cache_path() {
  const char* dir = std::getenv("TPNG_OUTPUT_DIR");
  return std::string(dir && *dir ? dir : ".") + "/tw_reference.json";
}

}  // namespace detail

inline nlohmann::json tw_reference_json(const TwReference& r) {
  return {{"smin", r.smin},   {"smax", r.smax},         {"step", r.step},
          {"nodes", r.nodes}, {"s", r.s},               {"cdf", r.cdf},
          {"mean", r.mean},   {"variance", r.variance}, {"skewness", r.skewness}};
}

// Corner-fluctuation reference law. Computed once per parameter set from the
// Airy-kernel Fredholm determinant and cached next to the other outputs so
// every tabulated number has a runnable provenance.
inline TwReference tw_reference(long nodes = 200, double step = 0.025, double smin = -6,
                                double smax = 4, bool use_cache = true) {
  if (nodes < 20) throw std::invalid_argument("tw_reference: too few quadrature nodes");
  if (!(step > 0) || !(smax > smin)) throw std::invalid_argument("tw_reference: bad grid");
  const std::string path = detail::tw_cache_path();
  if (use_cache) {
    std::ifstream in(path);
    if (in) {
      nlohmann::json j;
      in >> j;
      if (j.value("nodes", 0L) == nodes && j.value("step", 0.0) == step &&
          j.value("smin", 0.0) == smin && j.value("smax", 0.0) == smax) {
        TwReference r;
        r.smin = smin;
        r.smax = smax;
        r.step = step;
        r.nodes = nodes;
        r.s = j.at("s").get<std::vector<double>>();
        r.cdf = j.at("cdf").get<std::vector<double>>();
        r.mean = j.at("mean");
        r.variance = j.at("variance");
        r.skewness = j.at("skewness");
        return r;
      }
    }
  }
  TwReference r;
  r.smin = smin;
  r.smax = smax;
  r.step = step;
  r.nodes = nodes;
  gsl_integration_glfixed_table* tab =
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(nodes));
  const double upper = smax + 2;  // kernel is negligible past the grid end
  double prev = -1;
  for (double sv = smin; sv <= smax + step / 2; sv += step) {
    const double f = detail::airy_fredholm_det(sv, upper, nodes, tab);
    if (f < -1e-8 || f > 1 + 1e-8 || f < prev - 1e-9) {
      gsl_integration_glfixed_table_free(tab);
      throw std::runtime_error("tw_reference: quadrature failed to converge");
    }
    r.s.push_back(sv);
    r.cdf.push_back(std::min(1.0, std::max(0.0, f)));
    prev = f;
  }
  gsl_integration_glfixed_table_free(tab);
  if (1 - r.cdf.back() > 1e-4 || r.cdf.front() > 1e-4)
    throw std::runtime_error("tw_reference: grid does not capture the law");
  detail::tw_moments(r);
  if (use_cache) {
    std::ofstream out(path);
    if (out) out << tw_reference_json(r).dump(1) << "\n";
  }
  return r;
}

// (h - mu N) / (sigma N^{1/3}) with the corner growth constants
// mu = 2 theta sqrt(xy) / sqrt(1-t), sigma = theta^{1/3} (xy)^{1/6} (1-t)^{-1/6}.
inline double tw_normalize(double h, double N, double t, double theta, double x, double y) {
  if (!(N > 0)) throw std::invalid_argument("tw_normalize: N must be positive");
  const double mu = 2 * theta * std::sqrt(x * y) / std::sqrt(1 - t);
  const double sigma = std::cbrt(theta) * std::pow(x * y, 1.0 / 6) * std::pow(1 - t, -1.0 / 6);
  return (h - mu * N) / (sigma * std::cbrt(N));
}

// eps (h - eps^{-3} T) - log eps with T = 2 sqrt(chi eta).
inline double kpz_normalize(double h, double chi, double eta, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("kpz_normalize: eps must be positive");
  const double T = 2 * std::sqrt(chi * eta);
  return eps * (h - T / (eps * eps * eps)) - std::log(eps);
}

}  // namespace tpng
