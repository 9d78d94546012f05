#pragma once

#include <stdexcept>
#include <string>

namespace tflow {

// All recoverable failures carry a stable machine-readable code plus a
// human-readable message. The CLI prints "error: <code>: <message>".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

inline Error chart_error(const std::string& msg) { return Error("point-outside-chart", msg); }
inline Error mesh_mismatch(const std::string& msg) { return Error("mesh-mismatch", msg); }
inline Error resolution_error(const std::string& msg) { return Error("resolution-too-coarse", msg); }
inline Error radius_error(const std::string& msg) { return Error("radius-outside-chart", msg); }
inline Error blowup_error(const std::string& msg) { return Error("blowup", msg); }
inline Error stall_error(const std::string& msg) { return Error("solver-stall", msg); }
inline Error bracket_error(const std::string& msg) { return Error("bisection-bracket-failure", msg); }
inline Error parse_error(const std::string& msg) { return Error("parse-error", msg); }
inline Error validation_error(const std::string& msg) { return Error("validation-error", msg); }
inline Error incompatible_runs(const std::string& msg) { return Error("incompatible-runs", msg); }

} // namespace tflow
