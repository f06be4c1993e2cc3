#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sqzdisp {

/// Failure categories; the numeric values double as CLI exit codes.
enum class ErrorKind : int {
    generic = 1,
    config_invalid = 2,
    not_converged = 3,
    golden_mismatch = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct QuadratureNotConverged : Error {
    QuadratureNotConverged(const std::string& what, double achieved_error)
        : Error(ErrorKind::not_converged, what), achieved_error(achieved_error) {}
    double achieved_error;
};

struct NoBracket : Error {
    explicit NoBracket(const std::string& what) : Error(ErrorKind::not_converged, what) {}
};

struct UnstableCavity : Error {
    explicit UnstableCavity(const std::string& what) : Error(ErrorKind::not_converged, what) {}
};

struct NonOrthogonalBasis : Error {
    explicit NonOrthogonalBasis(const std::string& what) : Error(ErrorKind::config_invalid, what) {}
};

struct NeverDetected : Error {
    explicit NeverDetected(const std::string& what) : Error(ErrorKind::not_converged, what) {}
};

struct RejectionStall : Error {
    explicit RejectionStall(const std::string& what) : Error(ErrorKind::not_converged, what) {}
};

/// A config that fails validation. Each diagnostic names the offending field.
struct ConfigInvalid : Error {
    struct Diagnostic {
        std::string field;
        std::string message;
    };

    explicit ConfigInvalid(std::vector<Diagnostic> diags)
        : Error(ErrorKind::config_invalid, render(diags)), diagnostics(std::move(diags)) {}

    std::vector<Diagnostic> diagnostics;

private:
    static std::string render(const std::vector<Diagnostic>& diags) {
        std::string out = "invalid config:";
        for (const auto& d : diags) out += "\n  " + d.field + ": " + d.message;
        return out;
    }
};

struct GoldenMismatch : Error {
    explicit GoldenMismatch(std::vector<std::string> cells)
        : Error(ErrorKind::golden_mismatch, render(cells)), offending(std::move(cells)) {}

    std::vector<std::string> offending;

private:
    static std::string render(const std::vector<std::string>& cells) {
        std::string out = "golden mismatch (" + std::to_string(cells.size()) + " cells)";
        for (std::size_t i = 0; i < cells.size() && i < 20; ++i) out += "\n  " + cells[i];
        return out;
    }
};

}  // namespace sqzdisp
