#ifndef POLYDET_COMMON_HPP
#define POLYDET_COMMON_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace polydet {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid arguments, precondition violations.
struct domain_error : error {
    using error::error;
};

// Internal contract violations (double broadcast, mismatched rings, ...).
struct protocol_bug : error {
    using error::error;
};

// Missing preprocessing material; names the exhausted triple kind.
struct preprocessing_exhausted : error {
    using error::error;
};

// Information that the masked protocols inherently reveal: a zero secret,
// a non-unit operand, a singular input.  These are explicit signals, not bugs.
struct leak_signal : error {
    using error::error;
};

namespace detail {

// Field operations are attributed to whichever player is currently doing
// local compute; the engine points this at the active player's counter.
// The simulator is single-threaded, so a plain global keeps the per-op
// bookkeeping off the TLS path.
inline u64* op_counter = nullptr;

inline void count_op() {
    if (op_counter) ++*op_counter;
}

// Bulk attribution for kernels that run on raw words instead of calling the
// per-element wrappers.
inline void count_ops(u64 n) {
    if (op_counter) *op_counter += n;
}

inline u64 splitmix64(u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

// Counter-based stream cipher on splitmix64: the state is (key, counter), so
// forks are O(1), replay is exact, and draws cost a handful of multiplies.
struct Rng {
    using result_type = u64;

    Rng() = default;
    explicit Rng(u64 seed) : key_(seed) {}

    static constexpr u64 min() { return 0; }
    static constexpr u64 max() { return ~u64(0); }

    u64 operator()() { return detail::splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ctr_++); }

  private:
    u64 key_ = 0;
    u64 ctr_ = 0;
};

inline Rng make_stream(u64 master_seed, u64 stream_id) {
    return Rng(detail::splitmix64(master_seed ^ detail::splitmix64(stream_id)));
}

// Uniform draw in [0, bound) via multiply-shift with rejection (Lemire);
// std::uniform_int_distribution is implementation-defined and would break
// cross-build transcript replay.
inline u64 uniform_below(Rng& rng, u64 bound) {
    if (bound == 0) throw domain_error("uniform_below: zero bound");
    u128 m = u128(rng()) * bound;
    u64 lo = static_cast<u64>(m);
    if (lo < bound) {
        u64 threshold = (0 - bound) % bound;
        while (lo < threshold) {
            m = u128(rng()) * bound;
            lo = static_cast<u64>(m);
        }
    }
    return static_cast<u64>(m >> 64);
}

inline u64 bit_length(u64 x) {
    u64 b = 0;
    while (x) {
        ++b;
        x >>= 1;
    }
    return b;
}

// ceil(log2 q): bits needed to broadcast one element of GF(q).
inline u64 element_bits(u64 q) {
    return bit_length(q - 1);
}

}  // namespace polydet

#endif
