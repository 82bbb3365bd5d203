#pragma once

namespace pta {

// Thread budget from the PTA_SYNTH_THREADS environment variable:
// unset or invalid -> the OpenMP default, 0 -> 1 (fully sequential).
int env_thread_count();

// Hardware/OpenMP default.
int default_thread_count();

}  // namespace pta
