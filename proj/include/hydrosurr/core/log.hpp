#pragma once

#include <functional>
#include <string>

namespace hydrosurr::log {

enum class Level { info, warning };

using Sink = std::function<void(Level, const std::string&)>;

/// Replaces the process-wide sink (stderr by default); returns the previous one.
Sink set_sink(Sink sink);

void info(const std::string& msg);
void warn(const std::string& msg);

}  // namespace hydrosurr::log
