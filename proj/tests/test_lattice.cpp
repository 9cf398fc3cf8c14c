#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "tpng/lattice.hpp"

using namespace tpng;

namespace {

// exhaustive distribution of a step-boundary six-vertex window, by branching
// over every vertex decision; independent of the sampler's code path
struct SixvEnumeration {
  long N;
  std::vector<double> xs, ys;
  double t;
  std::map<long, double> east_exit_pmf;
  std::vector<std::pair<std::vector<ArrowConfig>, double>> configs;

  void run() {
    std::vector<ArrowConfig> cells(N * N);
    std::vector<long> below(N, 0);
    walk(1, 1, 1, below, cells, 1.0);
  }

  void walk(long x, long y, long left, std::vector<long>& below, std::vector<ArrowConfig>& cells,
            double prob) {
    if (y > N) {
      long exits = 0;
      for (long yy = 1; yy <= N; ++yy) exits += cells[(yy - 1) * N + (N - 1)].j2;
      east_exit_pmf[exits] += prob;
      configs.emplace_back(cells, prob);
      return;
    }
    const long i1 = below[x - 1], j1 = left;
    auto descend = [&](long i2, long j2, double p) {
      if (p <= 0) return;
      cells[(y - 1) * N + (x - 1)] = ArrowConfig{i1, j1, i2, j2};
      const long saved = below[x - 1];
      below[x - 1] = i2;
      if (x == N)
        walk(1, y + 1, 1, below, cells, prob * p);
      else
        walk(x + 1, y, j2, below, cells, prob * p);
      below[x - 1] = saved;
    };
    if (i1 == j1) {
      descend(i1, j1, 1.0);
    } else {
      const double w = ys[x - 1] / xs[y - 1];
      const double keep = (i1 == 1) ? t * (1 - w) / (1 - t * w) : (1 - w) / (1 - t * w);
      descend(i1, i1 + j1 - i1, keep);          // vertical state continues north
      descend(1 - i1, i1 + j1 - (1 - i1), 1 - keep);
    }
  }
};

// trajectory-following oracle: number of paths whose entry row into column x
// is at most y, with both-occupied vertices passing straight through
long paths_through_or_below(const std::vector<ArrowConfig>& cells, long N, long x, long y) {
  long count = 0;
  for (long y0 = 1; y0 <= N; ++y0) {
    long cx = 1, cy = y0;
    bool horizontal = true;
    std::map<long, long> entered;
    entered[1] = y0;
    while (cx <= N && cy <= N) {
      const ArrowConfig& c = cells[(cy - 1) * N + (cx - 1)];
      bool go_east;
      if (horizontal)
        go_east = (c.j2 == 1);  // both-occupied outputs carry it straight east
      else
        go_east = (c.i2 == 0);
      if (go_east) {
        ++cx;
        if (cx <= N && !entered.count(cx)) entered[cx] = cy;
        horizontal = true;
      } else {
        ++cy;
        horizontal = false;
      }
    }
    auto it = entered.find(x);
    if (it != entered.end() && it->second <= y) ++count;
  }
  return count;
}

double binom_sigma(double p, double n) { return std::sqrt(p * (1 - p) / n); }

}  // namespace

TEST_CASE("fusion map expands rapidities geometrically") {
  FusionMap m = fuse_params({2.0}, {3}, 0.5);
  REQUIRE(m.v.size() == 3);
  CHECK(m.v[0] == Catch::Approx(2.0));
  CHECK(m.v[1] == Catch::Approx(1.0));
  CHECK(m.v[2] == Catch::Approx(0.5));
  REQUIRE(m.r.size() == 1);
  CHECK(m.r[0] == Catch::Approx(std::pow(0.5, -1.5)));

  FusionMap id = fuse_params({0.4, 0.9}, {1, 1}, 0.3);
  CHECK(id.v == std::vector<double>{0.4, 0.9});
  CHECK(id.r[0] == Catch::Approx(std::pow(0.3, -0.5)));

  FusionMap ab = fuse_params({0.7, 0.2}, {2, 1}, 0.5);
  REQUIRE(ab.v.size() == 3);
  CHECK(ab.v[0] == Catch::Approx(0.7));
  CHECK(ab.v[1] == Catch::Approx(0.35));
  CHECK(ab.v[2] == Catch::Approx(0.2));

  CHECK_THROWS_AS(fuse_params({1.0}, {0}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(fuse_params({1.0, 2.0}, {1}, 0.5), std::invalid_argument);
}

TEST_CASE("fused sampler: empty boundary stays empty, step boundary injects") {
  std::vector<FusedRow> rows(4, FusedRow{0.25, 3});
  std::vector<FusedCol> cols(5, FusedCol{1.0, -0.5});
  QuadrantEnsemble e =
      sample_fused(rows, cols, 0.5, BoundaryData::empty_boundary(), 17);
  for (const ArrowConfig& c : e.cells) {
    CHECK(c.i1 == 0);
    CHECK(c.j1 == 0);
    CHECK(c.i2 == 0);
    CHECK(c.j2 == 0);
  }
  for (long y = 1; y <= 4; ++y)
    for (long x = 1; x <= 5; ++x) CHECK(e.height_at(x, y) == 0);
  check_consistency(e, BoundaryData::empty_boundary());

  std::vector<FusedRow> rows1(8, FusedRow{0.25, 1});
  std::vector<FusedCol> cols1(8, FusedCol{1.0, -0.5});
  QuadrantEnsemble s = sample_fused(rows1, cols1, 0.5, BoundaryData::step_boundary(), 3);
  for (long y = 1; y <= 8; ++y) CHECK(s.height_at(1, y) == y);  // all rows occupied at column 1
  check_consistency(s, BoundaryData::step_boundary());

  BoundaryData jb = BoundaryData::jstep_boundary({2, 3});
  std::vector<FusedRow> rows2{FusedRow{0.2, 2}, FusedRow{0.3, 3}};
  std::vector<FusedCol> cols2(3, FusedCol{1.0, -0.5});
  QuadrantEnsemble js = sample_fused(rows2, cols2, 0.5, jb, 11);
  CHECK(js.height_at(1, 1) == 2);
  CHECK(js.height_at(1, 2) == 5);
  check_consistency(js, jb);

  CHECK_THROWS_AS(
      sample_fused(rows2, cols2, 0.5, BoundaryData::jstep_boundary({3, 3}), 1),
      std::invalid_argument);  // entry exceeds row capacity
}

TEST_CASE("fused sampler is deterministic in the seed") {
  std::vector<FusedRow> rows(6, FusedRow{0.3, 2});
  std::vector<FusedCol> cols(6, FusedCol{1.0, -0.4});
  BoundaryData b = BoundaryData::jstep_boundary(std::vector<long>(6, 2));
  QuadrantEnsemble a1 = sample_fused(rows, cols, 0.5, b, 99);
  QuadrantEnsemble a2 = sample_fused(rows, cols, 0.5, b, 99);
  QuadrantEnsemble a3 = sample_fused(rows, cols, 0.5, b, 100);
  bool identical = true, distinct = false;
  for (std::size_t i = 0; i < a1.cells.size(); ++i) {
    identical = identical && a1.cells[i].i2 == a2.cells[i].i2 && a1.cells[i].j2 == a2.cells[i].j2;
    distinct = distinct || a1.cells[i].i2 != a3.cells[i].i2;
  }
  CHECK(identical);
  CHECK(distinct);
}

TEST_CASE("prefused single vertex reproduces the six-vertex marginal") {
  // t = 1/4, s = t^{-1/2} = 2, z = t^{-1/2}/w with w = 0.4
  const double t = 0.25, w = 0.4;
  std::vector<FusedRow> rows{FusedRow{2.0 / w, 1}};
  std::vector<FusedCol> cols{FusedCol{1.0, 2.0}};
  long turned = 0;
  const long n = 100000;
  for (long k = 0; k < n; ++k) {
    QuadrantEnsemble e = sample_fused(rows, cols, t, BoundaryData::step_boundary(), 1000 + k);
    turned += e.at(1, 1).i2;
    if (k == 0) CHECK(e.height_at(1, 1) == 1);
  }
  const double expect = (1 - t) * w / (1 - t * w);  // west arrow turns north
  CHECK(std::abs(double(turned) / n - expect) < 4 * binom_sigma(expect, n));
}

TEST_CASE("fused and prefused joint height laws agree under the fusion map") {
  const double t = 0.5;
  const std::vector<double> u{0.2, 0.3};
  const std::vector<long> J{2, 3};
  FusionMap fm = fuse_params(u, J, t);

  std::vector<FusedRow> frows{FusedRow{u[0], J[0]}, FusedRow{u[1], J[1]}};
  std::vector<FusedRow> prows;
  for (double v : fm.v) prows.push_back(FusedRow{v, 1});
  std::vector<FusedCol> cols{FusedCol{1.0, -0.5}, FusedCol{2.0, -0.3}};
  BoundaryData fb = BoundaryData::jstep_boundary({J[0], J[1]});
  BoundaryData pb = BoundaryData::step_boundary();

  const long n = 30000;
  std::map<std::pair<long, long>, double> pf, pp;
  for (long k = 0; k < n; ++k) {
    QuadrantEnsemble ef = sample_fused(frows, cols, t, fb, 5000 + k);
    pf[{ef.height_at(1, 1), ef.height_at(2, 2)}] += 1.0 / n;
    QuadrantEnsemble ep = sample_fused(prows, cols, t, pb, 900000 + k);
    pp[{ep.height_at(1, 2), ep.height_at(2, 5)}] += 1.0 / n;
  }
  // joint cells compared at a 4-sigma two-sample envelope; thin cells pooled
  std::map<std::pair<long, long>, double> keys = pf;
  for (auto& kv : pp) keys[kv.first] += kv.second;
  double pooled_a = 0, pooled_b = 0;
  for (auto& kv : keys) {
    const double a = pf.count(kv.first) ? pf[kv.first] : 0.0;
    const double b = pp.count(kv.first) ? pp[kv.first] : 0.0;
    if (kv.second * n < 50) {
      pooled_a += a;
      pooled_b += b;
      continue;
    }
    const double avg = (a + b) / 2;
    INFO("cell (" << kv.first.first << "," << kv.first.second << ")");
    CHECK(std::abs(a - b) <= 4 * std::sqrt(avg * (1 - avg) * 2.0 / n) + 1e-12);
  }
  CHECK(std::abs(pooled_a - pooled_b) <= 4 * std::sqrt((pooled_a + pooled_b) / n) + 1e-12);
}

TEST_CASE("complemented sampler: huge row parameter freezes the window") {
  std::vector<double> A(6, 1e12);
  std::vector<ComplementedCol> cols(6, ComplementedCol{1.0, false});
  QuadrantEnsemble e = sample_complemented(A, cols, 0.5, 7);
  for (const ArrowConfig& c : e.cells) {
    CHECK(c.i2 == 0);
    CHECK(c.j2 == 0);
  }
}

TEST_CASE("complemented sampler: nucleation count matches the point process rate") {
  // discretization at eps = 0.02 of the continuum box [0,1]^2
  const double eps = 0.02, theta = 1.0, t = 0.5;
  const long L = 50;
  std::vector<double> A(L, t / (1 - t) / (eps * theta));
  std::vector<ComplementedCol> cols(L, ComplementedCol{1.0 / (eps * theta), false});
  const long R = 400;
  long total = 0;
  for (long rep = 0; rep < R; ++rep) {
    QuadrantEnsemble e = sample_complemented(A, cols, t, 13 + rep);
    for (const ArrowConfig& c : e.cells)
      if (c.i1 == 0 && c.j1 == 0 && c.i2 >= 1) ++total;
  }
  const double mean = double(total) / R;
  // Poisson(theta^2 * chi * eta) target with a small discretization allowance
  CHECK(std::abs(mean - 1.0) < 4 * std::sqrt(1.0 / R) + 0.05);
}

TEST_CASE("complemented sampler: source columns nucleate at their own rates") {
  const double eps = 0.02, theta = 1.0, t = 0.5;
  const long L = 50;
  const std::vector<double> beta{1.5, 0.7};
  std::vector<double> A(L, t / (1 - t) / (eps * theta));
  std::vector<ComplementedCol> cols;
  for (double b : beta) cols.push_back(ComplementedCol{1.0 / b, true});
  for (long x = 2; x < L; ++x) cols.push_back(ComplementedCol{1.0 / (eps * theta), false});

  const long R = 400;
  std::array<long, 2> created{0, 0};
  for (long rep = 0; rep < R; ++rep) {
    QuadrantEnsemble e = sample_complemented(A, cols, t, 7000 + rep);
    for (long j = 1; j <= 2; ++j)
      for (long y = 1; y <= L; ++y) {
        const ArrowConfig& c = e.at(j, y);
        if (c.j1 == 0 && c.j2 == 1 && c.i2 == c.i1 + 1) ++created[j - 1];
      }
  }
  for (int j = 0; j < 2; ++j) {
    const double target = theta * beta[j];  // eps*theta*beta_j per row, L = 1/eps rows
    const double mean = double(created[j]) / R;
    INFO("column " << j + 1);
    CHECK(std::abs(mean - target) < 4 * std::sqrt(target / R) + 0.1);
  }
}

TEST_CASE("growth tiles: zero rate freezes, higher rate grows higher") {
  QuadrantEnsemble z = sample_phi_model(0.0, 1.0, 0.5, 10, 10, 5);
  for (const ArrowConfig& c : z.cells) CHECK((c.i2 == 0 && c.j2 == 0));

  const long L = 30, R = 500;
  double lo = 0, hi = 0, lo2 = 0, hi2 = 0;
  for (long rep = 0; rep < R; ++rep) {
    QuadrantEnsemble a = sample_phi_model(0.05, 0.5, 0.5, L, L, 100 + rep);
    QuadrantEnsemble b = sample_phi_model(0.05, 1.0, 0.5, L, L, 100 + rep);
    for (const ArrowConfig& c : a.cells) {
      CHECK(c.i2 <= 1);
      CHECK(c.j2 <= 1);
    }
    const double ha = a.height_at(L, L), hb = b.height_at(L, L);
    lo += ha / R;
    lo2 += ha * ha / R;
    hi += hb / R;
    hi2 += hb * hb / R;
  }
  const double se = std::sqrt((lo2 - lo * lo) / R + (hi2 - hi * hi) / R);
  CHECK(hi - lo > 3 * se);
}

TEST_CASE("six-vertex single vertex: east exit frequency matches its weight") {
  const double t = 0.3, x = 2.0, y = 0.8;
  const double w = y / x;
  const long n = 100000;
  long exits = 0;
  for (long k = 0; k < n; ++k) {
    auto [e, hNN] = sample_sixvertex({x}, {y}, t, 40 + k);
    exits += hNN;
  }
  const double expect = (1 - w) / (1 - t * w);  // west arrow passes east
  CHECK(std::abs(double(exits) / n - expect) < 4 * binom_sigma(expect, n));
}

TEST_CASE("six-vertex window matches exhaustive enumeration") {
  for (double t : {0.0, 0.6}) {
    SixvEnumeration oracle{2, {2.0, 1.6}, {0.8, 0.6}, t, {}, {}};
    oracle.run();
    double mass = 0;
    for (auto& kv : oracle.east_exit_pmf) mass += kv.second;
    REQUIRE(mass == Catch::Approx(1.0));

    const long n = 100000;
    std::map<long, double> freq;
    for (long k = 0; k < n; ++k) {
      auto [e, hNN] = sample_sixvertex(oracle.xs, oracle.ys, t, 777000 + k);
      freq[hNN] += 1.0 / n;
    }
    for (auto& kv : oracle.east_exit_pmf) {
      INFO("t=" << t << " exits=" << kv.first);
      CHECK(std::abs(freq[kv.first] - kv.second) <
            4 * binom_sigma(kv.second, n) + 1e-9);
    }
  }
}

TEST_CASE("height field equals the trajectory-following count") {
  SixvEnumeration oracle{2, {2.0, 1.6}, {0.8, 0.6}, 0.6, {}, {}};
  oracle.run();
  for (auto& [cells, prob] : oracle.configs) {
    QuadrantEnsemble e;
    e.width = e.height = 2;
    e.kind = ModelKind::sixvertex;
    e.cells = cells;
    for (long x = 1; x <= 2; ++x)
      for (long y = 1; y <= 2; ++y)
        CHECK(e.height_at(x, y) == paths_through_or_below(cells, 2, x, y));
  }
}

TEST_CASE("six-vertex rejects weights outside the unit interval") {
  CHECK_THROWS_AS(sample_sixvertex({0.5}, {0.8}, 0.3, 1), std::domain_error);  // w > 1
  CHECK_THROWS_AS(sample_sixvertex({1.0}, {-0.1}, 0.3, 1), std::domain_error);
}

TEST_CASE("ensemble dump carries the documented fields") {
  std::vector<FusedRow> rows(2, FusedRow{0.3, 2});
  std::vector<FusedCol> cols(3, FusedCol{1.0, -0.4});
  QuadrantEnsemble e = sample_fused(rows, cols, 0.5, BoundaryData::jstep_boundary({2, 2}), 21);
  nlohmann::json j = ensemble_json(e);
  CHECK(j["width"] == 3);
  CHECK(j["height"] == 2);
  CHECK(j["model-kind"] == "fused");
  CHECK(j["seed"] == 21);
  CHECK(j["parameters"]["t"] == 0.5);
  CHECK(j["parameters"]["boundary"] == "jstep");
  REQUIRE(j["vertices"].size() == 6);
  for (auto& v : j["vertices"]) REQUIRE(v.size() == 4);
  // row-major: first entry is vertex (1,1), whose west input is the boundary
  CHECK(j["vertices"][0][1] == 2);
  CHECK(e.at(1, 1).j1 == 2);
  CHECK_THROWS_AS(e.at(4, 1), std::out_of_range);
  CHECK_THROWS_AS(e.height_at(1, 3), std::out_of_range);
}
