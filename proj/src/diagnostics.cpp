#include "triq/diagnostics.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace triq::diagnostics {

namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

Handler& handler() {
    static Handler h = [](const std::string& msg) { std::cerr << "triq warning: " << msg << '\n'; };
    return h;
}

thread_local std::vector<std::string>* capture = nullptr;

} // namespace

Handler set_handler(Handler h) {
    std::lock_guard<std::mutex> lock(sink_mutex());
    return std::exchange(handler(), std::move(h));
}

void warn(const std::string& message) {
    if (capture) {
        capture->push_back(message);
        return;
    }
    std::lock_guard<std::mutex> lock(sink_mutex());
    if (handler()) handler()(message);
}

ScopedCapture::ScopedCapture() : previous_(std::exchange(capture, &messages_)) {}

ScopedCapture::~ScopedCapture() { capture = previous_; }

} // namespace triq::diagnostics
