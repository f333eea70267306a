#include "sumspace/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>

namespace sumspace::log {

spdlog::logger& get() {
    static std::shared_ptr<spdlog::logger> lg = [] {
        auto l = std::make_shared<spdlog::logger>("sumspace",
                                                  std::make_shared<spdlog::sinks::stderr_sink_st>());
        const char* env = std::getenv("SUMSPACE_LOG");
        std::string lvl = env ? env : "error";
        if (lvl == "debug")
            l->set_level(spdlog::level::debug);
        else if (lvl == "info")
            l->set_level(spdlog::level::info);
        else
            l->set_level(spdlog::level::err);
        l->set_pattern("[%l] %v");
        return l;
    }();
    return *lg;
}

}  // namespace sumspace::log
