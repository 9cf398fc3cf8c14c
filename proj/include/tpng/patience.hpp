#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tpng/rng.hpp"

// Patience sorting with error probability t: each card scans the piles whose
// top card exceeds it in increasing-top order, missing each with probability
// t, and starts a new pile after missing all of them. The poissonized variant
// couples the pile count to the continuum growth height at the window corner.

namespace tpng {

struct Deck {
  std::vector<long> cards;  // draw order; labels must form {1..N}
};

inline void validate_deck(const Deck& d) {
  const long N = static_cast<long>(d.cards.size());
  std::vector<bool> seen(static_cast<std::size_t>(N), false);
  for (long c : d.cards) {
    if (c < 1 || c > N || seen[c - 1])
      throw std::invalid_argument("deck: cards must be a permutation of {1..N}");
    seen[c - 1] = true;
  }
}

inline Deck shuffled_deck(long N, RngStream& rng) {
  if (N < 0) throw std::invalid_argument("shuffled_deck: negative size");
  Deck d;
  d.cards.resize(static_cast<std::size_t>(N));
  for (long i = 0; i < N; ++i) d.cards[i] = i + 1;
  for (long i = N - 1; i > 0; --i) std::swap(d.cards[i], d.cards[rng.uniform_index(i + 1)]);
  return d;
}

struct PileState {
  std::vector<std::vector<long>> piles;  // creation order; bottom card first
  long pile_count() const { return static_cast<long>(piles.size()); }
};

// list of lists, each pile printed top card first
inline nlohmann::json piles_json(const PileState& st) {
  nlohmann::json out = nlohmann::json::array();
  for (const std::vector<long>& p : st.piles) {
    nlohmann::json jp = nlohmann::json::array();
    for (auto it = p.rbegin(); it != p.rend(); ++it) jp.push_back(*it);
    out.push_back(std::move(jp));
  }
  return out;
}

inline PileState patience_sort(const Deck& deck, double t, std::uint64_t seed) {
  validate_deck(deck);
  if (!(t >= 0) || t > 1) throw std::invalid_argument("patience_sort: need t in [0,1]");
  RngStream rng(seed, 0);
  PileState st;
  for (long card : deck.cards) {
    std::vector<std::pair<long, std::size_t>> eligible;  // (top card, pile)
    for (std::size_t p = 0; p < st.piles.size(); ++p)
      if (st.piles[p].back() > card) eligible.emplace_back(st.piles[p].back(), p);
    std::sort(eligible.begin(), eligible.end());
    const long g = static_cast<long>(eligible.size());
    // one geometric draw replaces the per-pile miss coin: the number of
    // misses before the first placement, capped at g for a new pile
    const long misses = (t >= 1.0) ? g : std::min(g, rng.geometric_misses(t));
    if (misses >= g)
      st.piles.push_back({card});
    else
      st.piles[eligible[misses].second].push_back(card);
  }
  return st;
}

inline long poissonized_pile_count(double theta2, double t, std::uint64_t seed) {
  if (!(theta2 >= 0)) throw std::invalid_argument("poissonized_pile_count: need theta2 >= 0");
  RngStream draw(seed, 1);
  const long N = draw.poisson(theta2);
  const Deck d = shuffled_deck(N, draw);
  return patience_sort(d, t, seed).pile_count();
}

}  // namespace tpng
