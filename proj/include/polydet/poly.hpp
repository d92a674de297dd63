#ifndef POLYDET_POLY_HPP
#define POLYDET_POLY_HPP

#include <vector>

#include "polydet/field.hpp"

namespace polydet {

// Dense polynomial over GF(q), ascending coefficients, no trailing zeros.
// The zero polynomial is an empty coefficient vector with degree() == -1.
struct Poly {
    std::vector<u64> c;

    Poly() = default;
    explicit Poly(std::vector<u64> coeffs) : c(std::move(coeffs)) { normalize(); }

    static Poly constant(u64 v) { return Poly(std::vector<u64>{v}); }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    u64 coeff(std::size_t i) const { return i < c.size() ? c[i] : 0; }
    u64 leading() const { return c.empty() ? 0 : c.back(); }

    void normalize() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    bool operator==(const Poly& o) const { return c == o.c; }
};

inline Poly poly_add(const PrimeField& f, const Poly& a, const Poly& b) {
    std::vector<u64> r(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.add(a.coeff(i), b.coeff(i));
    return Poly(std::move(r));
}

inline Poly poly_sub(const PrimeField& f, const Poly& a, const Poly& b) {
    std::vector<u64> r(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.sub(a.coeff(i), b.coeff(i));
    return Poly(std::move(r));
}

inline Poly poly_neg(const PrimeField& f, const Poly& a) {
    std::vector<u64> r(a.c.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.neg(a.c[i]);
    return Poly(std::move(r));
}

inline Poly poly_scale(const PrimeField& f, const Poly& a, u64 s) {
    std::vector<u64> r(a.c.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.mul(a.c[i], s);
    return Poly(std::move(r));
}

namespace detail {

inline void poly_mul_school(const PrimeField& f, const u64* a, std::size_t na, const u64* b,
                            std::size_t nb, u64* out) {
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
}

inline constexpr std::size_t kKaratsubaCutoff = 32;

inline std::vector<u64> poly_mul_rec(const PrimeField& f, std::vector<u64> a, std::vector<u64> b) {
    std::size_t na = a.size(), nb = b.size();
    if (na == 0 || nb == 0) return {};
    if (na < kKaratsubaCutoff || nb < kKaratsubaCutoff) {
        std::vector<u64> out(na + nb - 1, 0);
        poly_mul_school(f, a.data(), na, b.data(), nb, out.data());
        return out;
    }
    std::size_t h = std::max(na, nb) / 2;
    auto lo = [&](const std::vector<u64>& v) {
        return std::vector<u64>(v.begin(), v.begin() + std::min(h, v.size()));
    };
    auto hi = [&](const std::vector<u64>& v) {
        return v.size() > h ? std::vector<u64>(v.begin() + h, v.end()) : std::vector<u64>();
    };
    auto vadd = [&](std::vector<u64> x, const std::vector<u64>& y) {
        if (x.size() < y.size()) x.resize(y.size(), 0);
        for (std::size_t i = 0; i < y.size(); ++i) x[i] = f.add(x[i], y[i]);
        return x;
    };
    std::vector<u64> a0 = lo(a), a1 = hi(a), b0 = lo(b), b1 = hi(b);
    std::vector<u64> p0 = poly_mul_rec(f, a0, b0);
    std::vector<u64> p2 = poly_mul_rec(f, a1, b1);
    std::vector<u64> pm = poly_mul_rec(f, vadd(a0, a1), vadd(b0, b1));
    std::vector<u64> out(na + nb - 1, 0);
    for (std::size_t i = 0; i < p0.size(); ++i) out[i] = f.add(out[i], p0[i]);
    for (std::size_t i = 0; i < p2.size(); ++i) out[i + 2 * h] = f.add(out[i + 2 * h], p2[i]);
    for (std::size_t i = 0; i < pm.size(); ++i) {
        u64 m = pm[i];
        if (i < p0.size()) m = f.sub(m, p0[i]);
        if (i < p2.size()) m = f.sub(m, p2[i]);
        out[i + h] = f.add(out[i + h], m);
    }
    return out;
}

}  // namespace detail

inline Poly poly_mul(const PrimeField& f, const Poly& a, const Poly& b) {
    std::size_t na = a.c.size(), nb = b.c.size();
    // small operands over a small modulus: convolve into 128-bit accumulators
    // with one reduction per coefficient
    if (na != 0 && nb != 0 && na < detail::kKaratsubaCutoff && nb < detail::kKaratsubaCutoff &&
        f.modulus() < (1ULL << 32)) {
        std::vector<u64> out(na + nb - 1);
        for (std::size_t t = 0; t < out.size(); ++t) {
            u128 acc = 0;
            std::size_t lo = t >= nb ? t - nb + 1 : 0;
            std::size_t hi = std::min(na - 1, t);
            for (std::size_t i = lo; i <= hi; ++i) acc += u128(a.c[i]) * b.c[t - i];
            out[t] = f.reduce_wide(acc);
        }
        detail::count_ops(2 * na * nb);
        return Poly(std::move(out));
    }
    return Poly(detail::poly_mul_rec(f, a.c, b.c));
}

// Truncation mod X^k.
inline Poly poly_mod_xk(const Poly& a, std::size_t k) {
    if (a.c.size() <= k) return a;
    return Poly(std::vector<u64>(a.c.begin(), a.c.begin() + k));
}

inline u64 poly_eval(const PrimeField& f, const Poly& a, u64 x) {
    u64 acc = 0;
    for (std::size_t i = a.c.size(); i-- > 0;) acc = f.add(f.mul(acc, x), a.c[i]);
    return acc;
}

// Euclidean division; divisor must be nonzero.
inline std::pair<Poly, Poly> poly_divrem(const PrimeField& f, const Poly& a, const Poly& b) {
    if (b.is_zero()) throw domain_error("poly_divrem: division by zero polynomial");
    if (a.degree() < b.degree()) return {Poly{}, a};
    std::vector<u64> rem = a.c;
    std::vector<u64> quo(a.degree() - b.degree() + 1, 0);
    u64 lead_inv = f.inv(b.leading());
    for (int i = a.degree(); i >= b.degree(); --i) {
        u64 coef = f.mul(rem[i], lead_inv);
        if (coef == 0) continue;
        quo[i - b.degree()] = coef;
        for (int j = 0; j <= b.degree(); ++j)
            rem[i - b.degree() + j] = f.sub(rem[i - b.degree() + j], f.mul(coef, b.c[j]));
    }
    return {Poly(std::move(quo)), Poly(std::move(rem))};
}

inline Poly poly_mod(const PrimeField& f, const Poly& a, const Poly& b) {
    return poly_divrem(f, a, b).second;
}

inline Poly poly_monic(const PrimeField& f, const Poly& a) {
    if (a.is_zero()) return a;
    return poly_scale(f, a, f.inv(a.leading()));
}

inline Poly poly_gcd(const PrimeField& f, Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = poly_mod(f, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(f, a);
}

inline Poly poly_mulmod(const PrimeField& f, const Poly& a, const Poly& b, const Poly& m) {
    return poly_mod(f, poly_mul(f, a, b), m);
}

inline Poly poly_powmod(const PrimeField& f, Poly a, u64 e, const Poly& m) {
    Poly r = Poly::constant(f.one());
    a = poly_mod(f, a, m);
    while (e) {
        if (e & 1) r = poly_mulmod(f, r, a, m);
        a = poly_mulmod(f, a, a, m);
        e >>= 1;
    }
    return r;
}

// Monic f of degree k is irreducible iff no irreducible polynomial of degree
// <= k/2 divides it; x^(q^i) - x is the product of all irreducibles of degree
// dividing i, so gcd checks up to k/2 suffice.
inline bool poly_is_irreducible(const PrimeField& f, const Poly& p) {
    int k = p.degree();
    if (k < 1) return false;
    if (k == 1) return true;
    Poly x(std::vector<u64>{0, 1});
    Poly h = x;
    for (int i = 1; i <= k / 2; ++i) {
        h = poly_powmod(f, h, f.modulus(), p);
        Poly g = poly_gcd(f, poly_sub(f, h, x), p);
        if (g.degree() != 0) return false;
    }
    return true;
}

// Las Vegas: draw random monic polynomials of the requested degree until one
// is irreducible.
inline Poly irreducible_poly(const PrimeField& f, int degree, Rng& rng) {
    if (degree < 1) throw domain_error("irreducible_poly: degree must be >= 1");
    for (;;) {
        std::vector<u64> c(degree + 1);
        for (int i = 0; i < degree; ++i) c[i] = f.random(rng);
        c[degree] = 1;
        Poly p(std::move(c));
        if (poly_is_irreducible(f, p)) return p;
    }
}

// Inverse of a modulo m via extended Euclid; requires gcd(a, m) = 1.
inline Poly poly_invmod(const PrimeField& f, const Poly& a, const Poly& m) {
    if (a.is_zero()) throw domain_error("poly_invmod: inversion of zero");
    Poly r0 = m, r1 = poly_mod(f, a, m);
    Poly s0{}, s1 = Poly::constant(f.one());
    while (!r1.is_zero()) {
        auto [q, r2] = poly_divrem(f, r0, r1);
        Poly s2 = poly_sub(f, s0, poly_mul(f, q, s1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r0.degree() != 0) throw domain_error("poly_invmod: element not invertible");
    return poly_mod(f, poly_scale(f, s0, f.inv(r0.leading())), m);
}

// Exact polynomial ring GF(q)[X]; a commutative-ring view used by the
// division-free determinant and by the polynomial-matrix Beaver arithmetic.
struct PolyRing {
    PrimeField f;
    using Elem = Poly;

    Elem zero() const { return Poly{}; }
    Elem one() const { return Poly::constant(f.one()); }
    Elem add(const Elem& a, const Elem& b) const { return poly_add(f, a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return poly_sub(f, a, b); }
    Elem neg(const Elem& a) const { return poly_neg(f, a); }
    Elem mul(const Elem& a, const Elem& b) const { return poly_mul(f, a, b); }
    bool is_zero(const Elem& a) const { return a.is_zero(); }
};

// The residue field GF(q)[X]/f for a public monic irreducible f.  Elements
// are polynomials of degree < deg(f).
class ExtField {
  public:
    ExtField(PrimeField base, Poly modulus) : f_(base), mod_(std::move(modulus)) {
        if (mod_.degree() < 1 || mod_.leading() != 1)
            throw domain_error("ExtField: modulus must be monic of degree >= 1");
        if (!poly_is_irreducible(f_, mod_)) throw domain_error("ExtField: modulus not irreducible");
        // X^t mod f for t in [k, 2k-2], so products reduce with one table pass
        std::size_t k = static_cast<std::size_t>(mod_.degree());
        if (k >= 2) {
            std::vector<u64> cur(k, 0);
            for (std::size_t j = 0; j < k; ++j)
                cur[j] = mod_.coeff(j) == 0 ? 0 : f_.modulus() - mod_.coeff(j);
            xpow_.push_back(cur);
            for (std::size_t t = k + 1; t + 1 <= 2 * k - 1; ++t) {
                std::vector<u64> nx(k, 0);
                u64 top = cur[k - 1];
                for (std::size_t j = k - 1; j > 0; --j) nx[j] = cur[j - 1];
                if (top)
                    for (std::size_t j = 0; j < k; ++j)
                        nx[j] = f_.reduce_wide(u128(nx[j]) + u128(top) * xpow_[0][j]);
                cur = std::move(nx);
                xpow_.push_back(cur);
            }
        }
    }

    const PrimeField& base() const { return f_; }
    const Poly& modulus_poly() const { return mod_; }
    int extension_degree() const { return mod_.degree(); }
    u64 bits() const { return static_cast<u64>(extension_degree()) * f_.bits(); }

    using Elem = Poly;

    Elem zero() const { return Poly{}; }
    Elem one() const { return Poly::constant(f_.one()); }
    Elem reduce(const Poly& a) const { return poly_mod(f_, a, mod_); }
    Elem add(const Elem& a, const Elem& b) const { return poly_add(f_, a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return poly_sub(f_, a, b); }
    Elem neg(const Elem& a) const { return poly_neg(f_, a); }
    // Hot path: operands have degree < k.  Convolve into 128-bit accumulators
    // (one reduction per coefficient) and fold the high part down with the
    // precomputed X^t mod f table.
    Elem mul(const Elem& a, const Elem& b) const {
        if (a.is_zero() || b.is_zero()) return Poly{};
        // accumulators hold sums of sub-2^64 products only for small moduli
        if (f_.modulus() >= (1ULL << 32)) return poly_mulmod(f_, a, b, mod_);
        std::size_t k = static_cast<std::size_t>(extension_degree());
        std::size_t na = a.c.size(), nb = b.c.size(), nt = na + nb - 1;
        std::vector<u64> out(nt);
        for (std::size_t t = 0; t < nt; ++t) {
            u128 acc = 0;
            std::size_t lo = t >= nb ? t - nb + 1 : 0;
            std::size_t hi = std::min(na - 1, t);
            for (std::size_t i = lo; i <= hi; ++i) acc += u128(a.c[i]) * b.c[t - i];
            out[t] = f_.reduce_wide(acc);
        }
        detail::count_ops(2 * na * nb);
        if (nt <= k) return Poly(std::move(out));
        std::vector<u64> res(k);
        for (std::size_t j = 0; j < k; ++j) {
            u128 acc = out[j];
            for (std::size_t t = k; t < nt; ++t) acc += u128(out[t]) * xpow_[t - k][j];
            res[j] = f_.reduce_wide(acc);
        }
        detail::count_ops(2 * (nt - k) * k);
        return Poly(std::move(res));
    }
    Elem inv(const Elem& a) const { return poly_invmod(f_, a, mod_); }
    bool is_zero(const Elem& a) const { return a.is_zero(); }

    Elem random(Rng& rng) const {
        std::vector<u64> c(extension_degree());
        for (auto& v : c) v = f_.random(rng);
        return Poly(std::move(c));
    }

  private:
    PrimeField f_;
    Poly mod_;
    std::vector<std::vector<u64>> xpow_;
};

}  // namespace polydet

#endif
