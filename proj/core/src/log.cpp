#include "mbrom/log.hpp"

#include <iostream>
#include <mutex>

namespace mbrom::log {

namespace {
std::mutex sink_mutex;
Sink sink;  // empty = default stderr
}  // namespace

void set_warning_sink(Sink s) {
    std::lock_guard<std::mutex> lock(sink_mutex);
    sink = std::move(s);
}

void warn(const std::string& message) {
    std::lock_guard<std::mutex> lock(sink_mutex);
    if (sink) {
        sink(message);
    } else {
        std::cerr << "warning: " << message << "\n";
    }
}

}  // namespace mbrom::log
