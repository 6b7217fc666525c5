#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace kharper {

/// Environment variable that overrides the default worker count.
inline constexpr const char* threads_env_var = "KHARPER_THREADS";

/// requested > 0 is returned unchanged; otherwise KHARPER_THREADS, then the
/// hardware concurrency (at least 1).
int resolve_threads(int requested);

/// Calls body(i) for every i in [0, count) using up to `threads` workers.
/// Work items must write only to storage owned by index i. If any call
/// throws, the exception from the lowest failing index is rethrown after all
/// workers stop.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

} // namespace kharper
