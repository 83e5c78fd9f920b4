#pragma once

#include <cstdint>

namespace heisenlab {

inline constexpr const char* kVersion = "heisenlab 0.3.1";

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 22;

// Largest group that exhaustive passes may enumerate. HEISENLAB_CAP in the
// environment overrides the default.
std::uint64_t enumeration_cap();

// Worker count used by the range-partitioned passes. Results never depend on
// it; only wall time does.
unsigned worker_count();
void set_worker_count(unsigned workers);

}  // namespace heisenlab
