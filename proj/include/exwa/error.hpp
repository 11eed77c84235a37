#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace exwa {

enum class ErrorKind {
    // input and validation failures
    invalid_panel,
    malformed_rating,
    degenerate_instance,
    self_comparison,
    scale,
    inconsistent_instance,
    inconsistency_impossible,
    shape,
    domain,
    parse,
    schema,
    too_small,
    usage,
    data,
    kind,
    io,
    config,
    // numerical failures
    infeasible,
    unbounded,
    solver_failure,
    divergence,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for failures of the numerics rather than of the inputs.
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    /// The message without the "<kind> error: " prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace exwa
