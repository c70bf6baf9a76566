#include "execbench/parallel.hpp"

#include <charconv>
#include <cstdlib>

#include <omp.h>

namespace execbench {

std::optional<int> parse_thread_cap(std::string_view text) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || value <= 0) return std::nullopt;
    return value;
}

int configure_threads_from_env() {
    if (const char* env = std::getenv("EXECBENCH_THREADS")) {
        if (auto cap = parse_thread_cap(env)) omp_set_num_threads(*cap);
    }
    return max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace execbench
