#ifndef POLYDET_FIELD_HPP
#define POLYDET_FIELD_HPP

#include "polydet/common.hpp"

namespace polydet {

namespace detail {

inline u64 mulmod_raw(u64 a, u64 b, u64 q) {
    return static_cast<u64>((u128(a) * b) % q);
}

inline u64 powmod_raw(u64 a, u64 e, u64 q) {
    u64 r = 1 % q;
    while (e) {
        if (e & 1) r = mulmod_raw(r, a, q);
        a = mulmod_raw(a, a, q);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin; this base set decides primality for all 64-bit
// integers.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod_raw(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_raw(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

}  // namespace detail

// GF(q) for a prime q < 2^62, so products fit in a 128-bit intermediate.
// Elements are plain u64 values in [0, q).
class PrimeField {
  public:
    using Elem = u64;

    explicit PrimeField(u64 q) : q_(q) {
        if (q >= (1ULL << 62)) throw domain_error("PrimeField: modulus must be < 2^62");
        if (!detail::is_prime_u64(q)) throw domain_error("PrimeField: modulus must be prime");
        // For small moduli the hardware 128/64 division in mulmod dominates
        // every protocol; reciprocal multiplication replaces it.
        if (q < (1ULL << 32)) {
            magic_ = ~u64(0) / q;
            r64_ = (~u64(0) % q + 1) % q;  // 2^64 mod q
        }
    }

    u64 modulus() const { return q_; }
    u64 bits() const { return element_bits(q_); }

    u64 zero() const { return 0; }
    u64 one() const { return 1 % q_; }

    u64 add(u64 a, u64 b) const {
        detail::count_op();
        u64 s = a + b;
        return s >= q_ ? s - q_ : s;
    }

    u64 sub(u64 a, u64 b) const {
        detail::count_op();
        return a >= b ? a - b : a + q_ - b;
    }

    u64 neg(u64 a) const {
        detail::count_op();
        return a == 0 ? 0 : q_ - a;
    }

    u64 mul(u64 a, u64 b) const {
        detail::count_op();
        if (magic_) return barrett(a * b);  // a, b < q < 2^32: no overflow
        return detail::mulmod_raw(a, b, q_);
    }

    u64 pow(u64 a, u64 e) const { return detail::powmod_raw(a, e, q_); }

    u64 inv(u64 a) const {
        if (a == 0) throw domain_error("PrimeField: inversion of zero");
        detail::count_op();
        return detail::powmod_raw(a, q_ - 2, q_);
    }

    bool is_zero(u64 a) const { return a == 0; }

    u64 reduce(u64 a) const { return magic_ ? barrett(a) : a % q_; }

    // Reduction of a 128-bit accumulator (sums of products); not metered,
    // callers attribute their operation counts in bulk.
    u64 reduce_wide(u128 x) const {
        if (magic_) {
            u64 hi = static_cast<u64>(x >> 64);
            u64 lo = static_cast<u64>(x);
            if (hi == 0) return barrett(lo);
            u64 t = barrett(barrett(hi) * r64_);
            return barrett(t + barrett(lo));
        }
        return static_cast<u64>(x % q_);
    }

    u64 random(Rng& rng) const { return uniform_below(rng, q_); }

    u64 random_nonzero(Rng& rng) const { return 1 + uniform_below(rng, q_ - 1); }

    bool operator==(const PrimeField& o) const { return q_ == o.q_; }

  private:
    // x mod q via the precomputed reciprocal; exact for any u64 x.
    u64 barrett(u64 x) const {
        u64 est = static_cast<u64>((u128(x) * magic_) >> 64);
        u64 r = x - est * q_;
        while (r >= q_) r -= q_;
        return r;
    }

    u64 q_;
    u64 magic_ = 0;
    u64 r64_ = 0;
};

}  // namespace polydet

#endif
