#ifndef POLYDET_SERIES_HPP
#define POLYDET_SERIES_HPP

#include "polydet/poly.hpp"

namespace polydet {

// A truncated power series mod X^m is a fixed-length coefficient vector.
using Series = std::vector<u64>;

// Arithmetic in GF(q)[[X]]/X^m.  Units are the series with nonzero constant
// term; inversion is plain (local) Newton iteration.
struct SeriesRing {
    PrimeField f;
    std::size_t m;

    SeriesRing(PrimeField field, std::size_t length) : f(field), m(length) {
        if (m == 0) throw domain_error("SeriesRing: length must be positive");
    }

    using Elem = Series;

    Elem zero() const { return Series(m, 0); }
    Elem one() const {
        Series s(m, 0);
        s[0] = f.one();
        return s;
    }

    void check(const Elem& a) const {
        if (a.size() != m) throw domain_error("SeriesRing: length mismatch");
    }

    Elem add(const Elem& a, const Elem& b) const {
        check(a);
        check(b);
        Series r(m);
        for (std::size_t i = 0; i < m; ++i) r[i] = f.add(a[i], b[i]);
        return r;
    }

    Elem sub(const Elem& a, const Elem& b) const {
        check(a);
        check(b);
        Series r(m);
        for (std::size_t i = 0; i < m; ++i) r[i] = f.sub(a[i], b[i]);
        return r;
    }

    Elem neg(const Elem& a) const {
        check(a);
        Series r(m);
        for (std::size_t i = 0; i < m; ++i) r[i] = f.neg(a[i]);
        return r;
    }

    Elem mul(const Elem& a, const Elem& b) const {
        check(a);
        check(b);
        Series r(m, 0);
        if (f.modulus() < (1ULL << 32)) {
            // products fit in 64 bits: accumulate wide, reduce once per
            // coefficient
            for (std::size_t t = 0; t < m; ++t) {
                u128 acc = 0;
                for (std::size_t i = 0; i <= t; ++i) acc += u128(a[i]) * b[t - i];
                r[t] = f.reduce_wide(acc);
            }
            detail::count_ops(m * (m + 1));
            return r;
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; i + j < m; ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
        }
        return r;
    }

    Elem scale(const Elem& a, u64 s) const {
        check(a);
        Series r(m);
        for (std::size_t i = 0; i < m; ++i) r[i] = f.mul(a[i], s);
        return r;
    }

    bool is_zero(const Elem& a) const {
        for (u64 v : a)
            if (v != 0) return false;
        return true;
    }

    bool is_unit(const Elem& a) const {
        check(a);
        return a[0] != 0;
    }

    // Newton iteration: b <- b(2 - ab), doubling the number of correct
    // coefficients each step.
    Elem inv(const Elem& a) const {
        check(a);
        if (a[0] == 0) throw domain_error("SeriesRing: inversion of a non-unit");
        Series b(m, 0);
        b[0] = f.inv(a[0]);
        std::size_t prec = 1;
        while (prec < m) {
            prec = std::min(2 * prec, m);
            SeriesRing sub_ring(f, prec);
            Series at(a.begin(), a.begin() + prec);
            Series bt(b.begin(), b.begin() + prec);
            Series t = sub_ring.mul(at, bt);
            Series two = sub_ring.zero();
            two[0] = f.add(f.one(), f.one());
            bt = sub_ring.mul(bt, sub_ring.sub(two, t));
            std::copy(bt.begin(), bt.end(), b.begin());
        }
        return b;
    }

    Elem random(Rng& rng) const {
        Series r(m);
        for (auto& v : r) v = f.random(rng);
        return r;
    }

    Elem from_poly(const Poly& p) const {
        Series r(m, 0);
        for (std::size_t i = 0; i < std::min(m, p.c.size()); ++i) r[i] = p.c[i];
        return r;
    }

    Poly to_poly(const Elem& a) const { return Poly(std::vector<u64>(a.begin(), a.end())); }
};

}  // namespace polydet

#endif
