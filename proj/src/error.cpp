#include "exwa/error.hpp"

namespace exwa {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_panel: return "invalid-panel";
        case ErrorKind::malformed_rating: return "malformed-rating";
        case ErrorKind::degenerate_instance: return "degenerate-instance";
        case ErrorKind::self_comparison: return "self-comparison";
        case ErrorKind::scale: return "scale";
        case ErrorKind::inconsistent_instance: return "inconsistent-instance";
        case ErrorKind::inconsistency_impossible: return "inconsistency-impossible";
        case ErrorKind::shape: return "shape";
        case ErrorKind::domain: return "domain";
        case ErrorKind::parse: return "parse";
        case ErrorKind::schema: return "schema";
        case ErrorKind::too_small: return "too-small";
        case ErrorKind::usage: return "usage";
        case ErrorKind::data: return "data";
        case ErrorKind::kind: return "kind";
        case ErrorKind::io: return "io";
        case ErrorKind::config: return "config";
        case ErrorKind::infeasible: return "infeasible";
        case ErrorKind::unbounded: return "unbounded";
        case ErrorKind::solver_failure: return "solver-failure";
        case ErrorKind::divergence: return "divergence";
    }
    return "unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::infeasible:
        case ErrorKind::unbounded:
        case ErrorKind::solver_failure:
        case ErrorKind::divergence:
            return true;
        default:
            return false;
    }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind), message_(message) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace exwa
