#pragma once

#include <cstdint>

#include "heisenlab/oracle.hpp"

namespace heisenlab {

struct ErdosTuranReport {
  std::uint64_t commuting_pairs = 0;  // e(G), ordered, self-pairs included
  std::uint64_t order = 0;            // |G|
  std::uint64_t classes = 0;          // c(G)
  bool holds = false;                 // e(G) == |G| c(G)
};

/// Counts e(G) pair by pair and c(G) orbit by orbit, then compares
/// e(G) against |G| c(G).
template <oracle::EnumerableGroup G>
ErdosTuranReport erdos_turan_check(const G& group, std::uint64_t cap = enumeration_cap()) {
  ErdosTuranReport r;
  r.order = group.order();
  r.commuting_pairs = oracle::count_commuting_pairs(group, cap);
  r.classes = oracle::count_conjugacy_classes(group, cap);
  r.holds = r.commuting_pairs == r.order * r.classes;
  return r;
}

}  // namespace heisenlab
