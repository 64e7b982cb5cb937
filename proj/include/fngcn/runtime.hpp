#pragma once

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace fngcn {

/// Keeps glibc from returning training-sized buffers to the OS after every
/// epoch. Training allocates the same few hundred KB blocks each step; with
/// the default thresholds each one is an mmap/munmap pair. No-op elsewhere.
inline void tune_allocator() {
#if defined(__GLIBC__)
    mallopt(M_MMAP_THRESHOLD, 64 << 20);
    mallopt(M_TRIM_THRESHOLD, 256 << 20);
#endif
}

}  // namespace fngcn
