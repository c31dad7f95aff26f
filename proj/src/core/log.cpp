#include "hydrosurr/core/log.hpp"

#include <iostream>
#include <mutex>

namespace hydrosurr::log {
namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

Sink& current_sink() {
    static Sink sink = [](Level level, const std::string& msg) {
        std::cerr << (level == Level::warning ? "warning: " : "") << msg << '\n';
    };
    return sink;
}

void emit(Level level, const std::string& msg) {
    std::lock_guard lock(sink_mutex());
    if (current_sink()) current_sink()(level, msg);
}

}  // namespace

Sink set_sink(Sink sink) {
    std::lock_guard lock(sink_mutex());
    Sink previous = std::move(current_sink());
    current_sink() = std::move(sink);
    return previous;
}

void info(const std::string& msg) { emit(Level::info, msg); }
void warn(const std::string& msg) { emit(Level::warning, msg); }

}  // namespace hydrosurr::log
