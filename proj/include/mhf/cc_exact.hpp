#pragma once

#include <cstddef>
#include <cstdint>

#include "mhf/dag.hpp"
#include "mhf/pebbling.hpp"

namespace mhf {

inline constexpr std::size_t kDefaultCcNodeCap = 16;

struct CcExactResult {
  std::uint64_t cc = 0;
  Pebbling witness;
  std::uint64_t states_expanded = 0;
};

/// Minimum cumulative cost over legal parallel pebblings whose final
/// configuration holds every sink. Exact best-first search over pebbling
/// configurations; throws ResourceCapExceeded if node_count > node_cap
/// (hard limit 64).
std::uint64_t cc_exact(const Dag& g, std::size_t node_cap = kDefaultCcNodeCap);

/// Same search, also returning an optimal pebbling.
CcExactResult cc_exact_with_witness(const Dag& g, std::size_t node_cap = kDefaultCcNodeCap);

/// Decides cc(g) >= target with the same search, stopping once the search
/// frontier's lower bound reaches the target. Exact, and usually far cheaper
/// than computing cc(g) when the answer is yes.
bool cc_at_least(const Dag& g, std::uint64_t target, std::size_t node_cap = kDefaultCcNodeCap);

}  // namespace mhf
