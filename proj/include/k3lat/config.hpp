#pragma once

#include <cstddef>
#include <cstdint>

namespace k3lat {

/// Bounds on brute-force enumerations. Exceeding one raises ResourceError.
struct EnumerationLimits {
  /// Largest group order whose elements may be listed one by one.
  std::uint64_t max_elements = 10'000'000;
  /// Largest group order accepted by the brute-force isomorphism search.
  std::uint64_t max_isomorphism_order = 10'000;
  /// Largest rank accepted by short-vector enumeration.
  std::size_t max_root_rank = 24;
  /// Largest number of subgroups kept in memory during orbit enumeration.
  std::size_t max_subgroups = 5'000'000;
};

}  // namespace k3lat
