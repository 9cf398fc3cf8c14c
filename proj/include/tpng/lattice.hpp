#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tpng/rng.hpp"
#include "tpng/weights.hpp"

// Finite-window samplers for the discrete vertex models: the fused model with
// bounded horizontal capacity, its horizontally complemented unbounded-output
// variant, the two-state growth tiles, and the six-vertex quadrant. Vertices
// are resolved from their own RNG streams keyed by coordinates, so any
// processing schedule compatible with the south/west dependencies (we sweep
// rows bottom-up) produces the identical ensemble for a given seed.

namespace tpng {

enum class ModelKind { fused, complemented, phi, sixvertex };

inline const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::fused: return "fused";
    case ModelKind::complemented: return "complemented";
    case ModelKind::phi: return "phi";
    case ModelKind::sixvertex: return "sixvertex";
  }
  return "unknown";
}

// Entry counts along the west and south edges of the window. Row y of a
// J-step boundary injects west[y-1] arrows; step injects one per row.
struct BoundaryData {
  enum class Kind { empty, step, jstep, explicit_counts };
  Kind kind = Kind::empty;
  std::vector<long> west;
  std::vector<long> south;

  static BoundaryData empty_boundary() { return {}; }
  static BoundaryData step_boundary() { return {Kind::step, {}, {}}; }
  static BoundaryData jstep_boundary(std::vector<long> per_row) {
    for (long c : per_row)
      if (c < 0) throw std::invalid_argument("BoundaryData: J-step counts must be >= 0");
    return {Kind::jstep, std::move(per_row), {}};
  }
  static BoundaryData explicit_boundary(std::vector<long> west_counts,
                                        std::vector<long> south_counts) {
    for (long c : west_counts)
      if (c < 0) throw std::invalid_argument("BoundaryData: west counts must be >= 0");
    for (long c : south_counts)
      if (c < 0) throw std::invalid_argument("BoundaryData: south counts must be >= 0");
    return {Kind::explicit_counts, std::move(west_counts), std::move(south_counts)};
  }

  long west_count(long y) const {
    switch (kind) {
      case Kind::empty: return 0;
      case Kind::step: return 1;
      case Kind::jstep:
      case Kind::explicit_counts:
        return y <= static_cast<long>(west.size()) ? west[y - 1] : 0;
    }
    return 0;
  }
  long south_count(long x) const {
    if (kind == Kind::explicit_counts && x <= static_cast<long>(south.size()))
      return south[x - 1];
    return 0;
  }
  const char* name() const {
    switch (kind) {
      case Kind::empty: return "empty";
      case Kind::step: return "step";
      case Kind::jstep: return "jstep";
      case Kind::explicit_counts: return "explicit";
    }
    return "unknown";
  }
};

// A sampled window. cells is row-major with (x, y) at cells[(y-1)*width+x-1];
// the slots hold (i1, j1; i2, j2) for up-right models and (i1, h1; i2, h2)
// for complemented ones. The height field is derived from the cells on first
// use and cached; samplers populate it before returning, so finished
// ensembles are immutable and safe to share.
struct QuadrantEnsemble {
  long width = 0;
  long height = 0;
  ModelKind kind = ModelKind::fused;
  nlohmann::json parameters;
  std::uint64_t seed = 0;
  std::vector<ArrowConfig> cells;

  const ArrowConfig& at(long x, long y) const {
    check_domain(x, y);
    return cells[index(x, y)];
  }

  // number of paths through or below (x, y): horizontal arrows entering
  // column x at rows <= y (boundary injections at x = 1 included, since the
  // stored input slots carry them)
  long height_at(long x, long y) const {
    check_domain(x, y);
    if (hsum_.empty()) build_heights();
    return hsum_[index(x, y)];
  }

  // horizontal arrows leaving column x at rows <= y; at the east edge of the
  // six-vertex window this is the exit count the quadrant identities use
  long east_exits(long x, long y) const {
    check_domain(x, y);
    long n = 0;
    for (long yy = 1; yy <= y; ++yy) n += cells[index(x, yy)].j2;
    return n;
  }

  void build_heights() const {
    hsum_.assign(cells.size(), 0);
    for (long x = 1; x <= width; ++x) {
      long acc = 0;
      for (long y = 1; y <= height; ++y) {
        acc += cells[index(x, y)].j1;
        hsum_[index(x, y)] = acc;
      }
    }
  }

 private:
  std::size_t index(long x, long y) const {
    return static_cast<std::size_t>(y - 1) * width + static_cast<std::size_t>(x - 1);
  }
  void check_domain(long x, long y) const {
    if (x < 1 || x > width || y < 1 || y > height)
      throw std::out_of_range("QuadrantEnsemble: vertex outside the window");
  }
  mutable std::vector<long> hsum_;
};

inline long height(const QuadrantEnsemble& e, long x, long y) { return e.height_at(x, y); }

inline nlohmann::json ensemble_json(const QuadrantEnsemble& e) {
  nlohmann::json vs = nlohmann::json::array();
  for (const ArrowConfig& c : e.cells) vs.push_back({c.i1, c.j1, c.i2, c.j2});
  return {{"width", e.width},           {"height", e.height},
          {"model-kind", model_kind_name(e.kind)}, {"parameters", e.parameters},
          {"seed", e.seed},             {"vertices", std::move(vs)}};
}

namespace detail {

inline std::uint64_t vertex_stream(long x, long y) {
  return (static_cast<std::uint64_t>(y) << 32) | static_cast<std::uint64_t>(x);
}

// cache key over (row class, column class, inputs); the sampled windows stay
// far below the 16-bit-per-field capacity
inline std::uint64_t table_key(long rc, long cc, long a, long b) {
  if ((rc | cc | a | b) >= (1L << 16))
    throw std::domain_error("lattice sampler: table key field overflow");
  return (static_cast<std::uint64_t>(rc) << 48) | (static_cast<std::uint64_t>(cc) << 32) |
         (static_cast<std::uint64_t>(a) << 16) | static_cast<std::uint64_t>(b);
}

inline double checked_probability(long double w, long x, long y, const char* model) {
  if (!(w > -1e-9))
    throw std::domain_error(std::string(model) + ": negative transition probability at vertex (" +
                            std::to_string(x) + "," + std::to_string(y) + ")");
  return w < 0 ? 0.0 : static_cast<double>(w);
}

}  // namespace detail

struct FusedRow {
  double u;
  long J;
};
struct FusedCol {
  double xi;
  double s;
};

inline QuadrantEnsemble sample_fused(const std::vector<FusedRow>& rows,
                                     const std::vector<FusedCol>& cols, double t,
                                     const BoundaryData& boundary, std::uint64_t seed) {
  const long W = static_cast<long>(cols.size()), H = static_cast<long>(rows.size());
  if (W == 0 || H == 0) throw std::invalid_argument("sample_fused: empty domain");
  for (const FusedRow& r : rows)
    if (r.J < 1) throw std::invalid_argument("sample_fused: row capacity J must be >= 1");

  std::map<std::pair<double, long>, long> rowClassOf;
  std::vector<long> rowClass(H);
  for (long y = 0; y < H; ++y)
    rowClass[y] = rowClassOf.emplace(std::make_pair(rows[y].u, rows[y].J),
                                     static_cast<long>(rowClassOf.size()))
                      .first->second;
  std::map<std::pair<double, double>, long> colClassOf;
  std::vector<long> colClass(W);
  for (long x = 0; x < W; ++x)
    colClass[x] = colClassOf.emplace(std::make_pair(cols[x].xi, cols[x].s),
                                     static_cast<long>(colClassOf.size()))
                      .first->second;
  std::unordered_map<std::uint64_t, std::vector<double>> tables;

  QuadrantEnsemble e;
  e.width = W;
  e.height = H;
  e.kind = ModelKind::fused;
  e.seed = seed;
  e.cells.resize(static_cast<std::size_t>(W) * H);

  std::vector<long> below(W);
  for (long x = 1; x <= W; ++x) below[x - 1] = boundary.south_count(x);
  for (long y = 1; y <= H; ++y) {
    const long J = rows[y - 1].J;
    long left = boundary.west_count(y);
    if (left > J)
      throw std::invalid_argument("sample_fused: boundary entry exceeds row capacity");
    for (long x = 1; x <= W; ++x) {
      const long i1 = below[x - 1], j1 = left;
      const std::uint64_t key = detail::table_key(rowClass[y - 1], colClass[x - 1], i1, j1);
      auto [it, fresh] = tables.try_emplace(key);
      std::vector<double>& tab = it->second;
      const long i2lo = std::max(0L, i1 + j1 - J);
      if (fresh) {
        FusedParams<long double> p{static_cast<long double>(rows[y - 1].u) * cols[x - 1].xi, J,
                                   static_cast<long double>(cols[x - 1].s),
                                   static_cast<long double>(t)};
        long double total = 0;
        for (long i2 = i2lo; i2 <= i1 + j1; ++i2) {
          const double w =
              detail::checked_probability(fused_weight(p, ArrowConfig{i1, j1, i2, i1 + j1 - i2}),
                                          x, y, "sample_fused");
          tab.push_back(w);
          total += w;
        }
        if (std::abs(static_cast<double>(total) - 1.0) > 1e-8)
          throw std::domain_error("sample_fused: transition row does not sum to 1 at vertex (" +
                                  std::to_string(x) + "," + std::to_string(y) + ")");
        for (double& w : tab) w /= static_cast<double>(total);
      }
      long pick = static_cast<long>(tab.size()) - 1;
      if (tab.size() > 1) {
        const double u = RngStream(seed, detail::vertex_stream(x, y)).unit();
        double c = 0;
        for (std::size_t m = 0; m < tab.size(); ++m) {
          c += tab[m];
          if (u < c) {
            pick = static_cast<long>(m);
            break;
          }
        }
      } else {
        pick = 0;
      }
      const long i2 = i2lo + pick, j2 = i1 + j1 - i2;
      e.cells[(y - 1) * W + (x - 1)] = ArrowConfig{i1, j1, i2, j2};
      below[x - 1] = i2;
      left = j2;
    }
  }

  nlohmann::json ju = nlohmann::json::array(), jJ = nlohmann::json::array(),
                 jxi = nlohmann::json::array(), js = nlohmann::json::array();
  for (const FusedRow& r : rows) {
    ju.push_back(r.u);
    jJ.push_back(r.J);
  }
  for (const FusedCol& c : cols) {
    jxi.push_back(c.xi);
    js.push_back(c.s);
  }
  e.parameters = {{"t", t},   {"u", std::move(ju)},  {"J", std::move(jJ)},
                  {"xi", std::move(jxi)}, {"s", std::move(js)}, {"boundary", boundary.name()}};
  e.build_heights();
  return e;
}

// Fusion map: each base rapidity u_k expands into the geometric progression
// (u_k, t*u_k, ..., t^{J_k-1}*u_k) and the fused row gets r_k = t^{-J_k/2}.
struct FusionMap {
  std::vector<double> v;
  std::vector<double> r;
};

inline FusionMap fuse_params(const std::vector<double>& u, const std::vector<long>& J, double t) {
  if (u.size() != J.size()) throw std::invalid_argument("fuse_params: u and J sizes differ");
  FusionMap m;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (J[k] < 1) throw std::invalid_argument("fuse_params: J entries must be >= 1");
    double cur = u[k];
    for (long j = 0; j < J[k]; ++j) {
      m.v.push_back(cur);
      cur *= t;
    }
    m.r.push_back(std::pow(t, -0.5 * static_cast<double>(J[k])));
  }
  return m;
}

struct ComplementedCol {
  double omega;
  bool s_zero;  // false: the s -> infinity column family; true: s -> 0
};

// Empty-boundary complemented model. The unbounded output index is resolved
// by sequential inverse-CDF; the table rows are extended until the drawn
// uniform is covered or the residual tail falls below 1e-15.
inline QuadrantEnsemble sample_complemented(const std::vector<double>& A_rows,
                                            const std::vector<ComplementedCol>& cols, double t,
                                            std::uint64_t seed) {
  const long W = static_cast<long>(cols.size()), H = static_cast<long>(A_rows.size());
  if (W == 0 || H == 0) throw std::invalid_argument("sample_complemented: empty domain");

  std::map<double, long> rowClassOf;
  std::vector<long> rowClass(H);
  for (long y = 0; y < H; ++y)
    rowClass[y] = rowClassOf.emplace(A_rows[y], static_cast<long>(rowClassOf.size())).first->second;
  std::map<std::pair<double, bool>, long> colClassOf;
  std::vector<long> colClass(W);
  for (long x = 0; x < W; ++x)
    colClass[x] = colClassOf.emplace(std::make_pair(cols[x].omega, cols[x].s_zero),
                                     static_cast<long>(colClassOf.size()))
                      .first->second;
  std::unordered_map<std::uint64_t, std::vector<double>> tables;

  QuadrantEnsemble e;
  e.width = W;
  e.height = H;
  e.kind = ModelKind::complemented;
  e.seed = seed;
  e.cells.resize(static_cast<std::size_t>(W) * H);

  std::vector<long> below(W, 0);
  for (long y = 1; y <= H; ++y) {
    long left = 0;
    for (long x = 1; x <= W; ++x) {
      const long i1 = below[x - 1], h1 = left;
      const double A = A_rows[y - 1] * cols[x - 1].omega;
      const bool via_theta = cols[x - 1].s_zero;
      const std::uint64_t key = detail::table_key(rowClass[y - 1], colClass[x - 1], i1, h1);
      std::vector<double>& tab = tables[key];
      const long i2lo = std::max(0L, i1 - h1);

      const double u = RngStream(seed, detail::vertex_stream(x, y)).unit();
      double c = 0;
      long pick = -1;
      for (long m = 0;; ++m) {
        if (m >= static_cast<long>(tab.size())) {
          const long i2 = i2lo + m, h2 = i2 - i1 + h1;
          const double w = via_theta ? theta_weight(A, i1, h1, i2, h2, t)
                                     : psi_weight(A, i1, h1, i2, h2, t);
          tab.push_back(detail::checked_probability(w, x, y, "sample_complemented"));
        }
        c += tab[m];
        if (u < c) {
          pick = m;
          break;
        }
        if (1.0 - c < 1e-15) {
          pick = m;  // tail below the residual threshold, assign the last row
          break;
        }
        if (m + 1 >= 1000) {
          if (c < 1.0 - 1e-12)
            throw std::runtime_error(
                "sample_complemented: output CDF failed to converge within 1000 terms");
          pick = m;
          break;
        }
      }
      const long i2 = i2lo + pick, h2 = i2 - i1 + h1;
      e.cells[(y - 1) * W + (x - 1)] = ArrowConfig{i1, h1, i2, h2};
      below[x - 1] = i2;
      left = h2;
    }
  }

  nlohmann::json jA = nlohmann::json::array(), jo = nlohmann::json::array(),
                 jp = nlohmann::json::array();
  for (double A : A_rows) jA.push_back(A);
  for (const ComplementedCol& c : cols) {
    jo.push_back(c.omega);
    jp.push_back(c.s_zero ? "0" : "inf");
  }
  e.parameters = {{"t", t},
                  {"A", std::move(jA)},
                  {"omega", std::move(jo)},
                  {"s-pattern", std::move(jp)},
                  {"boundary", "empty"}};
  e.build_heights();
  return e;
}

// Two-state growth tiles with empty boundary: nucleation probability
// (theta*eps)^2 on doubly empty input, deterministic transport, survival
// probability t on collision.
inline QuadrantEnsemble sample_phi_model(double eps, double theta, double t, long width,
                                         long height, std::uint64_t seed) {
  if (width < 1 || height < 1) throw std::invalid_argument("sample_phi_model: empty domain");
  const double b = (theta * eps) * (theta * eps);
  if (b > 1) throw std::domain_error("sample_phi_model: nucleation probability exceeds 1");
  if (!(t >= 0) || t > 1) throw std::domain_error("sample_phi_model: need t in [0,1]");

  QuadrantEnsemble e;
  e.width = width;
  e.height = height;
  e.kind = ModelKind::phi;
  e.seed = seed;
  e.parameters = {{"eps", eps}, {"theta", theta}, {"t", t}, {"boundary", "empty"}};
  e.cells.resize(static_cast<std::size_t>(width) * height);

  std::vector<unsigned char> below(width, 0);
  for (long y = 1; y <= height; ++y) {
    long left = 0;
    for (long x = 1; x <= width; ++x) {
      const long i1 = below[x - 1], j1 = left;
      long i2, j2;
      if (i1 != j1) {  // lone arrows transport deterministically
        i2 = i1;
        j2 = j1;
      } else {
        const double p = (i1 == 0) ? b : t;  // create a pair, or survive a collision
        const bool occupied = RngStream(seed, detail::vertex_stream(x, y)).unit() < p;
        i2 = j2 = occupied ? 1 : 0;
      }
      e.cells[(y - 1) * width + (x - 1)] = ArrowConfig{i1, j1, i2, j2};
      below[x - 1] = static_cast<unsigned char>(i2);
      left = j2;
    }
  }
  e.build_heights();
  return e;
}

// Step-boundary N x N six-vertex window; the vertex in column a, row b is
// driven by the ratio ys[a-1] / xs[b-1]. Returns the ensemble together with
// the east-edge exit count h(N, N) used by the quadrant identities.
inline std::pair<QuadrantEnsemble, long> sample_sixvertex(const std::vector<double>& xs,
                                                          const std::vector<double>& ys, double t,
                                                          std::uint64_t seed) {
  if (xs.empty() || xs.size() != ys.size())
    throw std::invalid_argument("sample_sixvertex: need matching nonempty rapidity lists");
  const long N = static_cast<long>(xs.size());
  for (long a = 0; a < N; ++a)
    for (long b = 0; b < N; ++b) {
      const double w = ys[a] / xs[b];
      if (!(w >= 0) || w > 1 || std::abs(1 - t * w) < 1e-14)
        throw std::domain_error("sample_sixvertex: weight outside [0,1] at column " +
                                std::to_string(a + 1) + ", row " + std::to_string(b + 1));
    }

  QuadrantEnsemble e;
  e.width = N;
  e.height = N;
  e.kind = ModelKind::sixvertex;
  e.seed = seed;
  e.parameters = {{"t", t}, {"x", xs}, {"y", ys}, {"boundary", "step"}};
  e.cells.resize(static_cast<std::size_t>(N) * N);

  std::vector<unsigned char> below(N, 0);
  for (long y = 1; y <= N; ++y) {
    long left = 1;
    for (long x = 1; x <= N; ++x) {
      const long i1 = below[x - 1], j1 = left;
      long i2, j2;
      if (i1 == j1) {  // both or neither: outputs are forced
        i2 = i1;
        j2 = j1;
      } else {
        const double w = ys[x - 1] / xs[y - 1];
        // probability that the vertical state continues north
        const double keep = (i1 == 1) ? t * (1 - w) / (1 - t * w) : 1 - (1 - t) * w / (1 - t * w);
        const bool north = RngStream(seed, detail::vertex_stream(x, y)).unit() < keep;
        i2 = north ? i1 : 1 - i1;
        j2 = i1 + j1 - i2;
      }
      e.cells[(y - 1) * N + (x - 1)] = ArrowConfig{i1, j1, i2, j2};
      below[x - 1] = static_cast<unsigned char>(i2);
      left = j2;
    }
  }
  e.build_heights();
  const long hNN = e.east_exits(N, N);
  return {std::move(e), hNN};
}

// Structural audit used by the tests: conservation per vertex and agreement
// of shared edges with neighbors and with the declared boundary.
inline void check_consistency(const QuadrantEnsemble& e, const BoundaryData& boundary) {
  for (long y = 1; y <= e.height; ++y)
    for (long x = 1; x <= e.width; ++x) {
      const ArrowConfig& c = e.at(x, y);
      const bool conserved = (e.kind == ModelKind::complemented)
                                 ? (c.i1 - c.j1 == c.i2 - c.j2)
                                 : (c.i1 + c.j1 == c.i2 + c.j2);
      if (!conserved) throw std::logic_error("ensemble: conservation violated");
      const long expect_j1 = (x == 1) ? boundary.west_count(y) : e.at(x - 1, y).j2;
      const long expect_i1 = (y == 1) ? boundary.south_count(x) : e.at(x, y - 1).i2;
      if (c.j1 != expect_j1 || c.i1 != expect_i1)
        throw std::logic_error("ensemble: edge mismatch");
    }
}

}  // namespace tpng
