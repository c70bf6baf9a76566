#pragma once

#include <optional>
#include <string_view>

namespace execbench {

// Parses a worker cap such as the value of EXECBENCH_THREADS. Returns nullopt
// for empty, non-numeric or non-positive values.
std::optional<int> parse_thread_cap(std::string_view text);

// Applies EXECBENCH_THREADS (if set and valid) to the OpenMP runtime and
// returns the resulting maximum number of worker threads.
int configure_threads_from_env();

int max_threads();

}  // namespace execbench
