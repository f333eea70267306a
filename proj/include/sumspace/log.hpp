#pragma once

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace sumspace::log {

// Logger on stderr, level from SUMSPACE_LOG (error|info|debug, default error).
spdlog::logger& get();

template <class... A>
void info(fmt::format_string<A...> f, A&&... a) {
    if (get().should_log(spdlog::level::info)) get().info(fmt::format(f, std::forward<A>(a)...));
}
template <class... A>
void debug(fmt::format_string<A...> f, A&&... a) {
    if (get().should_log(spdlog::level::debug)) get().debug(fmt::format(f, std::forward<A>(a)...));
}
template <class... A>
void error(fmt::format_string<A...> f, A&&... a) {
    if (get().should_log(spdlog::level::err)) get().error(fmt::format(f, std::forward<A>(a)...));
}

}  // namespace sumspace::log
