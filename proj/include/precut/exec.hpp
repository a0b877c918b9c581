#pragma once

namespace precut {

// Kernels that have an OpenMP implementation also keep a serial reference.
// Both produce identical results; Serial exists for tests and benchmarks.
enum class Exec { Serial, Parallel };

}  // namespace precut
