#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace surveyscope {

/// One structured diagnostic line: level is "warning" or "info".
struct Diagnostic {
    std::string level;
    std::string code;
    std::string detail;
};

/// Collects diagnostics; optionally mirrors them as JSON lines to a stream.
class DiagnosticSink {
public:
    DiagnosticSink() = default;
    explicit DiagnosticSink(std::ostream* mirror) : mirror_(mirror) {}

    void warn(std::string code, std::string detail) {
        push({"warning", std::move(code), std::move(detail)});
    }
    void info(std::string code, std::string detail) {
        push({"info", std::move(code), std::move(detail)});
    }

    const std::vector<Diagnostic>& entries() const { return entries_; }
    bool has_warnings() const {
        for (const auto& d : entries_)
            if (d.level == "warning") return true;
        return false;
    }
    std::size_t count(const std::string& code) const {
        std::size_t n = 0;
        for (const auto& d : entries_)
            if (d.code == code) ++n;
        return n;
    }

private:
    void push(Diagnostic d);

    std::vector<Diagnostic> entries_;
    std::ostream* mirror_ = nullptr;
};

}  // namespace surveyscope
