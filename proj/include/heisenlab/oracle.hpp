#pragma once

// Brute-force group enumeration. These routines only use multiply, inverse
// and element indexing; they never consult class formulas or commuting
// shortcuts, so they can certify the constructions elsewhere in the library.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <deque>
#include <vector>

#include "heisenlab/config.hpp"
#include "heisenlab/parallel.hpp"

namespace heisenlab::oracle {

template <class G>
concept EnumerableGroup = requires(const G& g, const typename G::Element& a, std::uint64_t i) {
  { g.order() } -> std::convertible_to<std::uint64_t>;
  { g.element(i) } -> std::convertible_to<typename G::Element>;
  { g.index_of(a) } -> std::convertible_to<std::uint64_t>;
  { g.multiply(a, a) } -> std::convertible_to<typename G::Element>;
  { g.inverse(a) } -> std::convertible_to<typename G::Element>;
  { g.generators() } -> std::convertible_to<std::vector<typename G::Element>>;
  g.require_enumerable(i);
};

/// Ordered pairs (a, b), a == b included, with ab == ba.
template <EnumerableGroup G>
std::uint64_t count_commuting_pairs(const G& group, std::uint64_t cap = enumeration_cap()) {
  group.require_enumerable(cap);
  const std::uint64_t order = group.order();
  std::vector<typename G::Element> elems;
  elems.reserve(order);
  for (std::uint64_t i = 0; i < order; ++i) elems.push_back(group.element(i));

  std::vector<std::uint64_t> partial(worker_count(), 0);
  parallel_ranges(order, [&](std::size_t begin, std::size_t end, unsigned w) {
    std::uint64_t count = 0;
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < order; ++j) {
        if (group.multiply(elems[i], elems[j]) == group.multiply(elems[j], elems[i])) ++count;
      }
    }
    partial[w] = count;
  });
  std::uint64_t unordered = 0;
  for (auto c : partial) unordered += c;
  return 2 * unordered + order;
}

/// Sizes of the conjugacy classes, found by closing each unvisited element
/// under conjugation by the generators. Classes appear in order of their
/// smallest element index.
template <EnumerableGroup G>
std::vector<std::uint64_t> conjugacy_class_sizes(const G& group,
                                                 std::uint64_t cap = enumeration_cap()) {
  group.require_enumerable(cap);
  const std::uint64_t order = group.order();
  const auto gens = group.generators();
  std::vector<typename G::Element> gen_inv;
  for (const auto& g : gens) gen_inv.push_back(group.inverse(g));

  std::vector<bool> visited(order, false);
  std::vector<std::uint64_t> sizes;
  std::deque<typename G::Element> queue;
  for (std::uint64_t seed = 0; seed < order; ++seed) {
    if (visited[seed]) continue;
    visited[seed] = true;
    std::uint64_t size = 1;
    queue.push_back(group.element(seed));
    while (!queue.empty()) {
      auto a = std::move(queue.front());
      queue.pop_front();
      for (std::size_t g = 0; g < gens.size(); ++g) {
        auto b = group.multiply(group.multiply(gen_inv[g], a), gens[g]);
        const auto idx = group.index_of(b);
        if (!visited[idx]) {
          visited[idx] = true;
          ++size;
          queue.push_back(std::move(b));
        }
      }
    }
    sizes.push_back(size);
  }
  return sizes;
}

template <EnumerableGroup G>
std::uint64_t count_conjugacy_classes(const G& group, std::uint64_t cap = enumeration_cap()) {
  return conjugacy_class_sizes(group, cap).size();
}

/// The conjugacy class of `a`, as sorted element indices.
template <EnumerableGroup G>
std::vector<std::uint64_t> conjugacy_orbit(const G& group, const typename G::Element& a,
                                           std::uint64_t cap = enumeration_cap()) {
  group.require_enumerable(cap);
  const auto gens = group.generators();
  std::vector<typename G::Element> gen_inv;
  for (const auto& g : gens) gen_inv.push_back(group.inverse(g));
  std::vector<bool> visited(group.order(), false);
  std::vector<std::uint64_t> orbit{group.index_of(a)};
  visited[orbit.front()] = true;
  std::deque<typename G::Element> queue{a};
  while (!queue.empty()) {
    auto x = std::move(queue.front());
    queue.pop_front();
    for (std::size_t g = 0; g < gens.size(); ++g) {
      auto b = group.multiply(group.multiply(gen_inv[g], x), gens[g]);
      const auto idx = group.index_of(b);
      if (!visited[idx]) {
        visited[idx] = true;
        orbit.push_back(idx);
        queue.push_back(std::move(b));
      }
    }
  }
  std::sort(orbit.begin(), orbit.end());
  return orbit;
}

}  // namespace heisenlab::oracle
