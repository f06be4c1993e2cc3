#pragma once

namespace sqzdisp {

/// Selects the serial reference loop or the OpenMP loop of a kernel.
/// Both produce bit-identical results: parallel kernels write into
/// per-item slots and reduce in a fixed order afterwards.
enum class Exec { serial, parallel };

/// Sets the OpenMP thread count (no-op when n <= 0).
void set_thread_count(int n);
[[nodiscard]] int thread_count();

}  // namespace sqzdisp
