#ifndef POLYDET_RINGS_HPP
#define POLYDET_RINGS_HPP

#include <compare>

#include "polydet/polymatrix.hpp"

namespace polydet {

enum class TripleKind : u32 { field, series, matrix, polymat, extfield };

inline const char* kind_name(TripleKind k) {
    switch (k) {
        case TripleKind::field: return "field";
        case TripleKind::series: return "series";
        case TripleKind::matrix: return "matrix";
        case TripleKind::polymat: return "polymat";
        case TripleKind::extfield: return "extfield";
    }
    return "?";
}

// Kind plus shape parameters: series length, matrix dimension, (n, d) for
// polynomial matrices, extension degree for the residue field.
struct TripleKey {
    TripleKind kind;
    u32 a = 0;
    u32 b = 0;

    auto operator<=>(const TripleKey&) const = default;
};

inline std::string key_name(const TripleKey& k) {
    std::string s = kind_name(k.kind);
    if (k.a || k.b) s += "(" + std::to_string(k.a) + (k.b ? "," + std::to_string(k.b) : "") + ")";
    return s;
}

// How many plain field triples the interactive generator of a composite kind
// consumes; lets the meter report both accounting views.
inline u64 field_triple_provenance(const TripleKey& k) {
    switch (k.kind) {
        case TripleKind::field: return 1;
        case TripleKind::series: return 2 * u64(k.a) - 1;
        case TripleKind::matrix: return u64(k.a) * k.a * k.a;
        case TripleKind::polymat: return (2 * u64(k.b) + 1) * u64(k.a) * k.a * k.a;
        case TripleKind::extfield: return 0;  // dealt, no field-triple lineage
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Beaver ring adaptors.  Each ring exposes: Elem, arithmetic, uniform
// sampling, a flat word encoding (for dealing and triple files), the
// broadcast size of one element, and its triple key.
// ---------------------------------------------------------------------------

struct FieldRing {
    PrimeField f;
    using Elem = u64;

    Elem zero() const { return 0; }
    Elem one() const { return f.one(); }
    Elem add(Elem a, Elem b) const { return f.add(a, b); }
    Elem sub(Elem a, Elem b) const { return f.sub(a, b); }
    Elem neg(Elem a) const { return f.neg(a); }
    Elem mul(Elem a, Elem b) const { return f.mul(a, b); }
    Elem inv(Elem a) const { return f.inv(a); }
    bool is_zero(Elem a) const { return a == 0; }
    bool is_unit(Elem a) const { return a != 0; }
    Elem random(Rng& rng) const { return f.random(rng); }

    u64 elem_bits() const { return f.bits(); }
    std::size_t words() const { return 1; }
    void flatten(Elem a, std::vector<u64>& out) const { out.push_back(a); }
    Elem unflatten(const u64* w) const { return f.reduce(w[0]); }
    TripleKey key() const { return {TripleKind::field, 0, 0}; }
};

struct SeriesBeaverRing {
    SeriesRing r;
    using Elem = Series;

    Elem zero() const { return r.zero(); }
    Elem one() const { return r.one(); }
    Elem add(const Elem& a, const Elem& b) const { return r.add(a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return r.sub(a, b); }
    Elem neg(const Elem& a) const { return r.neg(a); }
    Elem mul(const Elem& a, const Elem& b) const { return r.mul(a, b); }
    Elem inv(const Elem& a) const { return r.inv(a); }
    bool is_zero(const Elem& a) const { return r.is_zero(a); }
    bool is_unit(const Elem& a) const { return r.is_unit(a); }
    Elem random(Rng& rng) const { return r.random(rng); }

    u64 elem_bits() const { return u64(r.m) * r.f.bits(); }
    std::size_t words() const { return r.m; }
    void flatten(const Elem& a, std::vector<u64>& out) const {
        out.insert(out.end(), a.begin(), a.end());
    }
    Elem unflatten(const u64* w) const {
        Series s(w, w + r.m);
        for (auto& v : s) v = r.f.reduce(v);
        return s;
    }
    TripleKey key() const { return {TripleKind::series, static_cast<u32>(r.m), 0}; }
};

struct MatrixRing {
    PrimeField f;
    std::size_t n;
    using Elem = Matrix<u64>;

    FieldRing scalar() const { return {f}; }
    Elem zero() const { return Matrix<u64>(n, 0); }
    Elem one() const { return mat_identity(scalar(), n); }
    Elem add(const Elem& a, const Elem& b) const { return mat_add(scalar(), a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return mat_sub(scalar(), a, b); }
    Elem neg(const Elem& a) const { return mat_neg(scalar(), a); }
    Elem mul(const Elem& a, const Elem& b) const { return mat_mul(scalar(), a, b); }
    Elem random(Rng& rng) const { return mat_random(scalar(), n, rng); }

    u64 elem_bits() const { return u64(n) * n * f.bits(); }
    std::size_t words() const { return n * n; }
    void flatten(const Elem& a, std::vector<u64>& out) const {
        out.insert(out.end(), a.e.begin(), a.e.end());
    }
    Elem unflatten(const u64* w) const {
        Matrix<u64> m(n, 0);
        for (std::size_t i = 0; i < m.e.size(); ++i) m.e[i] = f.reduce(w[i]);
        return m;
    }
    TripleKey key() const { return {TripleKind::matrix, static_cast<u32>(n), 0}; }
};

// Matrices over GF(q)[X] with a public bound d on operand degrees.  Products
// are exact polynomials (degree up to 2d); callers working in the truncated
// series ring reduce mod X^m afterwards, which commutes with the product.
struct PolyMatrixRing {
    PrimeField f;
    std::size_t n;
    int d;
    using Elem = Matrix<Poly>;

    PolyRing scalar() const { return {f}; }
    Elem zero() const { return Matrix<Poly>(n, Poly{}); }
    Elem one() const { return mat_identity(scalar(), n); }
    Elem add(const Elem& a, const Elem& b) const { return mat_add(scalar(), a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return mat_sub(scalar(), a, b); }
    Elem neg(const Elem& a) const { return mat_neg(scalar(), a); }
    Elem mul(const Elem& a, const Elem& b) const { return mat_mul(scalar(), a, b); }

    Elem random(Rng& rng) const {
        Matrix<Poly> m(n, Poly{});
        for (auto& p : m.e) {
            std::vector<u64> c(d + 1);
            for (auto& v : c) v = f.random(rng);
            p = Poly(std::move(c));
        }
        return m;
    }

    // Broadcast size is fixed by the public degree bound, not by the actual
    // degrees of an element's entries.
    u64 elem_bits() const { return u64(n) * n * u64(d + 1) * f.bits(); }
    std::size_t words() const { return n * n * std::size_t(d + 1); }
    void flatten(const Elem& a, std::vector<u64>& out) const {
        for (const auto& p : a.e)
            for (int j = 0; j <= d; ++j) out.push_back(p.coeff(j));
    }
    Elem unflatten(const u64* w) const {
        Matrix<Poly> m(n, Poly{});
        for (std::size_t i = 0; i < m.e.size(); ++i) {
            std::vector<u64> c(w + i * (d + 1), w + (i + 1) * (d + 1));
            for (auto& v : c) v = f.reduce(v);
            m.e[i] = Poly(std::move(c));
        }
        return m;
    }
    // The x part of a triple is an exact product, so its entries go up to
    // degree 2d and need a wider encoding than y and z.
    std::size_t product_words() const { return n * n * std::size_t(2 * d + 1); }
    void flatten_product(const Elem& a, std::vector<u64>& out) const {
        for (const auto& p : a.e)
            for (int j = 0; j <= 2 * d; ++j) out.push_back(p.coeff(j));
    }
    Elem unflatten_product(const u64* w) const {
        Matrix<Poly> m(n, Poly{});
        std::size_t stride = 2 * std::size_t(d) + 1;
        for (std::size_t i = 0; i < m.e.size(); ++i) {
            std::vector<u64> c(w + i * stride, w + (i + 1) * stride);
            for (auto& v : c) v = f.reduce(v);
            m.e[i] = Poly(std::move(c));
        }
        return m;
    }
    TripleKey key() const {
        return {TripleKind::polymat, static_cast<u32>(n), static_cast<u32>(d)};
    }
};

struct ExtFieldRing {
    ExtField ef;
    using Elem = Poly;

    Elem zero() const { return ef.zero(); }
    Elem one() const { return ef.one(); }
    Elem add(const Elem& a, const Elem& b) const { return ef.add(a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return ef.sub(a, b); }
    Elem neg(const Elem& a) const { return ef.neg(a); }
    Elem mul(const Elem& a, const Elem& b) const { return ef.mul(a, b); }
    Elem inv(const Elem& a) const { return ef.inv(a); }
    bool is_zero(const Elem& a) const { return a.is_zero(); }
    bool is_unit(const Elem& a) const { return !a.is_zero(); }
    Elem random(Rng& rng) const { return ef.random(rng); }

    u64 elem_bits() const { return ef.bits(); }
    std::size_t words() const { return ef.extension_degree(); }
    void flatten(const Elem& a, std::vector<u64>& out) const {
        for (int j = 0; j < ef.extension_degree(); ++j) out.push_back(a.coeff(j));
    }
    Elem unflatten(const u64* w) const {
        std::vector<u64> c(w, w + ef.extension_degree());
        for (auto& v : c) v = ef.base().reduce(v);
        return Poly(std::move(c));
    }
    TripleKey key() const {
        return {TripleKind::extfield, static_cast<u32>(ef.extension_degree()), 0};
    }
};

// Whether the ring's matrix products go through dedicated matrix triples
// (prime field) or through batched scalar triples (residue field).
template <class R>
inline constexpr bool has_matrix_triples = false;
template <>
inline constexpr bool has_matrix_triples<FieldRing> = true;

}  // namespace polydet

#endif
