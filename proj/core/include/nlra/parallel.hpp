#pragma once

#include <cstddef>
#include <functional>

namespace nlra {

/// Worker count for internal parallel loops. NLRA_THREADS caps it when set to
/// a positive integer; otherwise hardware concurrency is used.
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads with a static
/// partition. Bodies must write only to slot i of their outputs; any
/// reduction happens afterwards in index order, so results do not depend on
/// the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace nlra
