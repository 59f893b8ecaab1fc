#pragma once

#include <cstdint>

// Per-operation event counters, compiled in only when FFDOT_INSTRUMENT is
// defined (test builds). Release builds of the library and the bench tool
// leave the hot paths untouched.
//
// Counters are thread_local so tests can run kernels on worker threads
// without synchronisation noise.

namespace ffdot::instrument {

struct Counters {
    // machine '%' / division-based modular reductions executed
    std::uint64_t machine_remainders = 0;
    // REDC invocations
    std::uint64_t montgomery_reductions = 0;
    // floating-point reductions (the multiply-by-1/p rounding step)
    std::uint64_t float_reductions = 0;
    // post-reduction +p / -p fixups inside the float reduce
    std::uint64_t float_plus_adjust = 0;
    std::uint64_t float_minus_adjust = 0;

    void reset() { *this = Counters{}; }
};

inline thread_local Counters counters;

} // namespace ffdot::instrument

#ifdef FFDOT_INSTRUMENT
#define FFDOT_COUNT(field) (++::ffdot::instrument::counters.field)
#else
#define FFDOT_COUNT(field) ((void)0)
#endif
