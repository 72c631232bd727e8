// diagnostics.hpp: process-wide sink for non-fatal numerical warnings
// (e.g. an imaginary residue in a trace that should be real). The default
// handler prints to stderr; tests and the CLI may install their own.

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace triq::diagnostics {

using Handler = std::function<void(const std::string&)>;

// Returns the previous handler. Passing an empty handler silences warnings.
Handler set_handler(Handler h);

void warn(const std::string& message);

// While alive, warnings raised on the constructing thread are collected here
// instead of reaching the handler. Captures nest.
class ScopedCapture {
public:
    ScopedCapture();
    ~ScopedCapture();
    ScopedCapture(const ScopedCapture&) = delete;
    ScopedCapture& operator=(const ScopedCapture&) = delete;

    const std::vector<std::string>& messages() const noexcept { return messages_; }

private:
    std::vector<std::string> messages_;
    std::vector<std::string>* previous_;
};

} // namespace triq::diagnostics
