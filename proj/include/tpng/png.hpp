#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tpng/rng.hpp"

// Continuum growth sampler on a rectangle: Poisson nucleations emit a north
// and an east ray; when rays from distinct nucleations meet they annihilate
// with probability 1-t and pass through with probability t. The boundary
// variant first runs m source columns left of the window and feeds the
// horizontal rays surviving past the last column in through the west edge.

namespace tpng {

struct Nucleation {
  double x = 0;
  double y = 0;
};

// origin plus the kill coordinate along the travel axis (x for horizontal
// rays, y for vertical); killed=false means the ray reached the window edge
struct RaySegment {
  double x0 = 0;
  double y0 = 0;
  double end = 0;
  bool killed = false;
};

struct CrossingEvent {
  double x = 0;
  double y = 0;
  bool pass = false;
};

// one boundary-column interaction: a horizontal ray met `alive` vertical rays
struct ColumnCrossing {
  long column = 0;
  double y = 0;
  long alive = 0;
  bool pass = false;
};

struct RayDiagram {
  double chi = 0, eta = 0;
  double intensity = 0;
  double t = 0;
  std::uint64_t seed = 0;
  double theta = 0;           // boundary variant only
  std::vector<double> beta;   // boundary variant only

  std::vector<Nucleation> nucleations;    // sorted by increasing x
  std::vector<double> entry_heights;      // west-edge horizontal sources
  std::vector<RaySegment> horizontals;    // entry rays first, then one per nucleation
  std::vector<RaySegment> verticals;      // one per nucleation
  std::vector<CrossingEvent> crossings;   // sweep order
  // (horizontal, vertical) segment indices killed together at one point
  std::vector<std::pair<long, long>> annihilation_links;

  std::vector<std::vector<double>> column_sources;  // boundary phase, per column
  std::vector<ColumnCrossing> column_crossings;
};

// number of horizontal segments meeting {x} x [0, y]; a killed segment covers
// [x0, end) while a surviving one reaches its boundary coordinate inclusively
inline long png_height(const RayDiagram& d, double x, double y) {
  if (!(x >= 0) || x > d.chi || !(y >= 0) || y > d.eta)
    throw std::out_of_range("png_height: query outside the window");
  long n = 0;
  for (const RaySegment& h : d.horizontals)
    if (h.y0 <= y && h.x0 <= x && (x < h.end || (!h.killed && x <= h.end))) ++n;
  return n;
}

namespace detail {

// x-sweep: nucleations in increasing x, the fresh vertical ray resolving
// crossings with alive horizontal rays above its origin in increasing height
template <class Decide>
inline void run_ray_sweep(RayDiagram& d, Decide&& decide) {
  d.horizontals.clear();
  d.verticals.clear();
  d.crossings.clear();
  d.annihilation_links.clear();
  std::map<double, long> alive;  // height -> horizontal segment index
  for (std::size_t k = 0; k < d.entry_heights.size(); ++k) {
    d.horizontals.push_back({0.0, d.entry_heights[k], d.chi, false});
    alive[d.entry_heights[k]] = static_cast<long>(k);
  }
  for (std::size_t i = 0; i < d.nucleations.size(); ++i) {
    const Nucleation v = d.nucleations[i];
    RaySegment vert{v.x, v.y, d.eta, false};
    for (auto it = alive.upper_bound(v.y); it != alive.end();) {
      const bool pass = decide();
      d.crossings.push_back({v.x, it->first, pass});
      if (pass) {
        ++it;
        continue;
      }
      d.horizontals[it->second].end = v.x;
      d.horizontals[it->second].killed = true;
      vert.end = it->first;
      vert.killed = true;
      d.annihilation_links.emplace_back(it->second, static_cast<long>(i));
      alive.erase(it);
      break;
    }
    d.verticals.push_back(vert);
    const long hidx = static_cast<long>(d.horizontals.size());
    d.horizontals.push_back({v.x, v.y, d.chi, false});
    alive[v.y] = hidx;
  }
}

inline bool all_distinct(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

inline void validate_diagram_inputs(const RayDiagram& d) {
  std::vector<double> xs, ys = d.entry_heights;
  for (const Nucleation& v : d.nucleations) {
    if (!(v.x >= 0) || v.x > d.chi || !(v.y >= 0) || v.y > d.eta)
      throw std::invalid_argument("ray diagram: nucleation outside the window");
    xs.push_back(v.x);
    ys.push_back(v.y);
  }
  if (!all_distinct(std::move(xs)) || !all_distinct(std::move(ys)))
    throw std::invalid_argument("ray diagram: coordinates must be pairwise distinct");
}

// Poisson points on the window with pairwise distinct coordinates; float
// ties (probability ~0) are rejected and the whole set resampled
inline void sample_poisson_points(RayDiagram& d, RngStream& rng) {
  for (;;) {
    const long K = rng.poisson(d.intensity * d.chi * d.eta);
    std::vector<Nucleation> pts(static_cast<std::size_t>(K));
    std::vector<double> xs, ys = d.entry_heights;
    for (Nucleation& p : pts) {
      p.x = rng.unit() * d.chi;
      p.y = rng.unit() * d.eta;
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    if (!all_distinct(std::move(xs)) || !all_distinct(std::move(ys))) continue;
    std::sort(pts.begin(), pts.end(), [](const Nucleation& a, const Nucleation& b) { return a.x < b.x; });
    d.nucleations = std::move(pts);
    return;
  }
}

inline void check_window(double chi, double eta, double t, const char* who) {
  if (!(chi > 0) || !(eta > 0))
    throw std::invalid_argument(std::string(who) + ": window sides must be positive");
  if (!(t >= 0) || t > 1) throw std::invalid_argument(std::string(who) + ": need t in [0,1]");
}

}  // namespace detail

inline RayDiagram sample_png(double chi, double eta, double intensity, double t,
                             std::uint64_t seed) {
  detail::check_window(chi, eta, t, "sample_png");
  if (!(intensity >= 0)) throw std::invalid_argument("sample_png: intensity must be >= 0");
  RayDiagram d;
  d.chi = chi;
  d.eta = eta;
  d.intensity = intensity;
  d.t = t;
  d.seed = seed;
  RngStream coords(seed, 0);
  detail::sample_poisson_points(d, coords);
  RngStream dec(seed, 1);
  detail::run_ray_sweep(d, [&] { return dec.unit() < t; });
  return d;
}

// Source columns C_1..C_m sit left of the window and each carries its own
// Poisson process of sources with rate theta*beta_j. Horizontal rays arriving
// at a column holding i alive vertical rays below them pass with probability
// t^i, otherwise they die together with the highest-nucleated alive vertical
// ray below (which of them dies is law-irrelevant; this choice is pinned for
// reproducibility). Survivors past C_m enter the window through the west edge.
inline RayDiagram sample_png_boundary(double chi, double eta, double theta, double t,
                                      const std::vector<double>& beta, std::uint64_t seed) {
  detail::check_window(chi, eta, t, "sample_png_boundary");
  if (!(theta >= 0)) throw std::invalid_argument("sample_png_boundary: theta must be >= 0");
  for (double b : beta)
    if (!(b > 0)) throw std::invalid_argument("sample_png_boundary: beta entries must be positive");

  RayDiagram d;
  d.chi = chi;
  d.eta = eta;
  d.intensity = theta * theta;
  d.t = t;
  d.seed = seed;
  d.theta = theta;
  d.beta = beta;

  RngStream col(seed, 2);
  std::vector<double> arriving;
  for (std::size_t j = 0; j < beta.size(); ++j) {
    std::vector<double> src;
    for (;;) {
      const long K = col.poisson(theta * beta[j] * eta);
      src.assign(static_cast<std::size_t>(K), 0.0);
      for (double& y : src) y = col.unit() * eta;
      std::sort(src.begin(), src.end());
      std::vector<double> probe = src;
      probe.insert(probe.end(), arriving.begin(), arriving.end());
      if (detail::all_distinct(std::move(probe))) break;
    }
    std::vector<double> alive_src = src;  // sorted, all initially alive
    std::vector<double> survivors;
    std::sort(arriving.begin(), arriving.end());
    for (double y : arriving) {
      const long i =
          std::lower_bound(alive_src.begin(), alive_src.end(), y) - alive_src.begin();
      const bool pass = col.unit() < std::pow(t, static_cast<double>(i));
      d.column_crossings.push_back({static_cast<long>(j) + 1, y, i, pass});
      if (pass) {
        survivors.push_back(y);
      } else {
        alive_src.erase(alive_src.begin() + (i - 1));
      }
    }
    d.column_sources.push_back(src);
    arriving = std::move(survivors);
    arriving.insert(arriving.end(), src.begin(), src.end());
  }
  std::sort(arriving.begin(), arriving.end());
  d.entry_heights = std::move(arriving);

  RngStream coords(seed, 0);
  detail::sample_poisson_points(d, coords);
  RngStream dec(seed, 1);
  detail::run_ray_sweep(d, [&] { return dec.unit() < t; });
  return d;
}

// replays a diagram from fixed points and scripted crossing decisions (true =
// pass); used for regression fixtures and structural tests
inline RayDiagram replay_png(double chi, double eta, std::vector<Nucleation> points,
                             const std::vector<bool>& decisions) {
  detail::check_window(chi, eta, 0.0, "replay_png");
  RayDiagram d;
  d.chi = chi;
  d.eta = eta;
  std::sort(points.begin(), points.end(),
            [](const Nucleation& a, const Nucleation& b) { return a.x < b.x; });
  d.nucleations = std::move(points);
  detail::validate_diagram_inputs(d);
  std::size_t k = 0;
  detail::run_ray_sweep(d, [&] {
    if (k >= decisions.size()) throw std::invalid_argument("replay_png: decision script exhausted");
    return static_cast<bool>(decisions[k++]);
  });
  if (k != decisions.size())
    throw std::invalid_argument("replay_png: unused scripted decisions");
  return d;
}

// Chains of nucleations in which each member's horizontal ray dies with the
// next member's vertical ray. Every nucleation sits in exactly one chain;
// kills by west-entry rays do not join nucleations, so their victims root
// their own chains. Indices are 0-based positions in d.nucleations.
inline std::vector<std::vector<long>> broken_lines(const RayDiagram& d) {
  const long E = static_cast<long>(d.entry_heights.size());
  const long N = static_cast<long>(d.nucleations.size());
  std::vector<long> next(static_cast<std::size_t>(N), -1), prev(static_cast<std::size_t>(N), -1);
  for (auto [h, v] : d.annihilation_links) {
    if (h < E) continue;
    next[h - E] = v;
    prev[v] = h - E;
  }
  std::vector<std::vector<long>> lines;
  for (long i = 0; i < N; ++i) {
    if (prev[i] != -1) continue;
    std::vector<long> line;
    for (long j = i; j != -1; j = next[j]) line.push_back(j);
    lines.push_back(std::move(line));
  }
  return lines;
}

inline nlohmann::json diagram_json(const RayDiagram& d) {
  nlohmann::json pts = nlohmann::json::array();
  for (const Nucleation& v : d.nucleations) pts.push_back({v.x, v.y});
  nlohmann::json cr = nlohmann::json::array();
  for (const CrossingEvent& c : d.crossings)
    cr.push_back({{"x", c.x}, {"y", c.y}, {"decision", c.pass ? "pass" : "annihilate"}});
  auto seg = [](const RaySegment& s) {
    return nlohmann::json{{"x", s.x0}, {"y", s.y0}, {"end", s.end}, {"killed", s.killed}};
  };
  nlohmann::json hs = nlohmann::json::array(), vs = nlohmann::json::array();
  for (const RaySegment& s : d.horizontals) hs.push_back(seg(s));
  for (const RaySegment& s : d.verticals) vs.push_back(seg(s));
  return {{"rect", {{"chi", d.chi}, {"eta", d.eta}}},
          {"intensity", d.intensity},
          {"t", d.t},
          {"seed", d.seed},
          {"nucleations", std::move(pts)},
          {"crossings", std::move(cr)},
          {"segments", {{"horizontal", std::move(hs)}, {"vertical", std::move(vs)}}},
          {"entry-heights", d.entry_heights},
          {"theta", d.theta},
          {"beta", d.beta}};
}

inline std::string height_grid_csv(const RayDiagram& d, long nx, long ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("height_grid_csv: need a nonempty grid");
  std::string out = "x,y,height\n";
  for (long iy = 1; iy <= ny; ++iy)
    for (long ix = 1; ix <= nx; ++ix) {
      const double x = d.chi * static_cast<double>(ix) / static_cast<double>(nx);
      const double y = d.eta * static_cast<double>(iy) / static_cast<double>(ny);
      out += std::to_string(x) + "," + std::to_string(y) + "," +
             std::to_string(png_height(d, x, y)) + "\n";
    }
  return out;
}

// 45-degree rotation between window coordinates and the droplet space-time
// picture; the window [0,x]x[0,y] maps onto the nucleations affecting the
// height at (space, time), and the product of window coordinates equals the
// area (time^2 - space^2)/2
struct LightConePoint {
  double space = 0;
  double time = 0;
};

inline LightConePoint rect_to_lightcone(double x, double y) {
  return {(x - y) / std::numbers::sqrt2, (x + y) / std::numbers::sqrt2};
}

inline std::pair<double, double> lightcone_to_rect(LightConePoint p) {
  return {(p.time + p.space) / std::numbers::sqrt2, (p.time - p.space) / std::numbers::sqrt2};
}

}  // namespace tpng
