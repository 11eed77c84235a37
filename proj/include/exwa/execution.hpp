#pragma once

namespace exwa {

/// Selects the OpenMP kernel or its serial reference. Both produce
/// bit-identical results; the serial path exists for testing and benchmarks.
enum class Execution { serial, parallel };

}  // namespace exwa
