#pragma once

#include <functional>
#include <string>

namespace mbrom::log {

using Sink = std::function<void(const std::string&)>;

// Thread-safe; default sink writes to stderr. Pass nullptr to restore the default.
void set_warning_sink(Sink sink);
void warn(const std::string& message);

}  // namespace mbrom::log
