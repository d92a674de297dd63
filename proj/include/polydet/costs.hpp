#ifndef POLYDET_COSTS_HPP
#define POLYDET_COSTS_HPP

#include <sstream>

#include "polydet/determinant.hpp"
#include "polydet/triples.hpp"

namespace polydet {

// ---------------------------------------------------------------------------
// Closed-form triple requirements, by construction (B = kCertBatch, the
// candidate batch width of one certification site):
//
//   certified unit            B triples of the ring (one cert per candidate)
//   unit/inverse pair         B triples of the ring
//   masked inversion          B triples of the ring
//   series inversion          B field (unit mask cert) + 1 series
//   fan_in(t)                 (t+1)B + 2t + 1 ring triples (+1 with inverse)
//   matrix product            1 matrix triple (field) / n^3 scalar (ext field)
//   rand_inv_mat(n)           2nB units + product + fan_in(2n)
//   det invertible(n)         rand_inv_mat + B inversion + product
//   det general(n)            T instances of the invertible case,
//                             T = min(n+1+kExtraPoints, field size)
//   eval/interpolate(n,d)     (nd+1) instances of det general
//   rand_mat_poly_det(n,m)    2nB field + fan_in(2n) series + 1 polymat
//   det_modx(n,d), m=nd+1     rand_mat_poly_det + series inversion + 1 polymat
//   det_modx_general(n,d)     T instances of det_modx
//   det_modf(n,d)             det general over K[X]/f, f of degree nd+1
//
// These are the numbers the meter must reproduce exactly on a retry-free run;
// a Las Vegas retry adds B cert triples of the affected kind per re-batch.
// ---------------------------------------------------------------------------

using TripleBudget = std::map<TripleKey, u64>;

inline void budget_add(TripleBudget& b, const TripleKey& k, u64 count) {
    if (count) b[k] += count;
}

inline void budget_merge(TripleBudget& b, const TripleBudget& o, u64 times = 1) {
    for (const auto& [k, c] : o) b[k] += c * times;
}

template <class R>
TripleBudget budget_rand_units(const R& ring, u64 count) {
    TripleBudget b;
    budget_add(b, ring.key(), count * kCertBatch);
    return b;
}

template <class R>
TripleBudget budget_inverse_unit(const R& ring) {
    TripleBudget b;
    budget_add(b, ring.key(), kCertBatch);
    return b;
}

inline TripleBudget budget_rand_unit_series(const PrimeField& f, u64 count) {
    TripleBudget b;
    budget_add(b, FieldRing{f}.key(), count * kCertBatch);
    return b;
}

inline TripleBudget budget_inverse_series(const PrimeField& f, std::size_t m) {
    TripleBudget b = budget_rand_unit_series(f, 1);
    budget_add(b, SeriesBeaverRing{SeriesRing{f, m}}.key(), 1);
    return b;
}

template <class R>
TripleBudget budget_fan_in(const R& ring, u64 t, bool with_inverse = false) {
    TripleBudget b;
    if (t == 0) return b;
    budget_add(b, ring.key(), (t + 1) * kCertBatch + 2 * t + 1 + (with_inverse ? 1 : 0));
    return b;
}

template <class R>
TripleBudget budget_mat_mul(const R& ring, std::size_t n) {
    TripleBudget b;
    if constexpr (has_matrix_triples<R>)
        budget_add(b, MatrixRing{ring.f, n}.key(), 1);
    else
        budget_add(b, ring.key(), u64(n) * n * n);
    return b;
}

template <class R>
TripleBudget budget_rand_inv_mat(const R& ring, std::size_t n, bool want_det = true) {
    TripleBudget b = budget_rand_units(ring, 2 * u64(n));
    budget_merge(b, budget_mat_mul(ring, n));
    if (want_det) budget_merge(b, budget_fan_in(ring, 2 * u64(n)));
    return b;
}

template <class R>
TripleBudget budget_det_field_invertible(const R& ring, std::size_t n) {
    TripleBudget b = budget_rand_inv_mat(ring, n);
    budget_merge(b, budget_inverse_unit(ring));
    budget_merge(b, budget_mat_mul(ring, n));
    return b;
}

template <class R>
TripleBudget budget_det_field_general(const R& ring, std::size_t n) {
    TripleBudget b;
    budget_merge(b, budget_det_field_invertible(ring, n), detail::general_point_count(ring, n));
    return b;
}

inline TripleBudget budget_det_eval_interpol(const PrimeField& f, std::size_t n, int d) {
    TripleBudget b;
    budget_merge(b, budget_det_field_general(FieldRing{f}, n), u64(n) * d + 1);
    return b;
}

inline TripleBudget budget_rand_mat_poly_det(const PrimeField& f, std::size_t n,
                                             std::size_t m) {
    TripleBudget b = budget_rand_unit_series(f, 2 * u64(n));
    budget_merge(b, budget_fan_in(SeriesBeaverRing{SeriesRing{f, m}}, 2 * u64(n)));
    budget_add(b, PolyMatrixRing{f, n, int(m) - 1}.key(), 1);
    return b;
}

inline TripleBudget budget_det_modx_impl(const PrimeField& f, std::size_t n, std::size_t m) {
    TripleBudget b = budget_rand_mat_poly_det(f, n, m);
    budget_merge(b, budget_inverse_series(f, m));
    budget_add(b, PolyMatrixRing{f, n, int(m) - 1}.key(), 1);
    return b;
}

inline TripleBudget budget_det_modx(const PrimeField& f, std::size_t n, int d) {
    return budget_det_modx_impl(f, n, u64(n) * d + 1);
}

inline TripleBudget budget_det_modx_general(const PrimeField& f, std::size_t n, int d) {
    u64 total = std::min<u64>(n + 1 + kExtraPoints, f.modulus());
    TripleBudget b;
    budget_merge(b, budget_det_modx_impl(f, n, u64(n) * d + 1), total);
    return b;
}

inline TripleBudget budget_det_modf(const PrimeField& f, std::size_t n, int d,
                                    u64 master_seed) {
    ExtField ef(f, modf_modulus(f, u64(n) * d + 1, master_seed));
    return budget_det_field_general(ExtFieldRing{ef}, n);
}

// Fills the store from the dealer so a protocol with the given budget can
// run; the multiplier leaves slack for Las Vegas retries.
inline void provision(EngineState& st, const TripleBudget& budget, u64 multiplier = 1) {
    for (const auto& [key, count] : budget) {
        u64 c = count * multiplier;
        switch (key.kind) {
            case TripleKind::field: deal_triples(st, FieldRing{st.field}, c); break;
            case TripleKind::series:
                deal_triples(st, SeriesBeaverRing{SeriesRing{st.field, key.a}}, c);
                break;
            case TripleKind::matrix: deal_triples(st, MatrixRing{st.field, key.a}, c); break;
            case TripleKind::polymat:
                deal_triples(st, PolyMatrixRing{st.field, key.a, int(key.b)}, c);
                break;
            case TripleKind::extfield: {
                ExtField ef(st.field, modf_modulus(st.field, key.a, st.master_seed));
                deal_triples(st, ExtFieldRing{ef}, c);
                break;
            }
        }
    }
}

// Provision the exact budget plus a little headroom of the certifiable
// kinds, so the rare re-batch of a Las Vegas site cannot exhaust the store.
inline void provision_with_slack(EngineState& st, const TripleBudget& budget) {
    provision(st, budget, 1);
    TripleBudget extra;
    for (const auto& [k, c] : budget)
        if (k.kind == TripleKind::field || k.kind == TripleKind::series ||
            k.kind == TripleKind::extfield)
            budget_add(extra, k, 4 * kCertBatch);
    provision(st, extra, 1);
}

// Fixed round counts of every protocol, by construction.  Tests pin the
// meter against these across the whole parameter grid.
namespace protocol_rounds {
constexpr u64 kBeaverMul = 1;
constexpr u64 kReveal = 1;
constexpr u64 kCertifiedUnit = 2;
constexpr u64 kInverseUnit = 2;
constexpr u64 kInverseSeries = 4;
constexpr u64 kFanIn = 6;
constexpr u64 kRandInvMat = 8;
constexpr u64 kRandInvMatNoDet = 3;
constexpr u64 kRandInvPolymat = 3;
constexpr u64 kDetFieldInvertible = 10;
constexpr u64 kDetFieldGeneral = 10;
constexpr u64 kDetEvalInterpol = 10;
constexpr u64 kRandMatPolyDet = 8;
constexpr u64 kDetModx = 12;
constexpr u64 kDetModxGeneral = 12;
constexpr u64 kDetModf = 10;
}  // namespace protocol_rounds

// ---------------------------------------------------------------------------
// Cost report rows (CSV): the meter flattened into the fixed column set.
// ---------------------------------------------------------------------------

struct CostReportRow {
    std::string protocol;
    u64 rounds = 0;
    u64 bits_per_player = 0;
    u64 triples_field = 0;
    u64 triples_series = 0;
    u64 triples_mat = 0;
    u64 triples_polymat = 0;
    u64 triples_extfield = 0;
    u64 field_ops = 0;

    static CostReportRow from_meter(std::string name, const CostMeter& m) {
        CostReportRow r;
        r.protocol = std::move(name);
        r.rounds = m.rounds;
        r.bits_per_player = m.bits_per_player();
        r.triples_field = m.triples_of(TripleKind::field);
        r.triples_series = m.triples_of(TripleKind::series);
        r.triples_mat = m.triples_of(TripleKind::matrix);
        r.triples_polymat = m.triples_of(TripleKind::polymat);
        r.triples_extfield = m.triples_of(TripleKind::extfield);
        r.field_ops = m.field_ops_per_player();
        return r;
    }

    static const char* csv_header() {
        return "protocol,rounds,bits_per_player,triples_field,triples_series,triples_mat,"
               "triples_polymat,triples_extfield,field_ops";
    }

    std::string csv() const {
        std::ostringstream os;
        os << protocol << ',' << rounds << ',' << bits_per_player << ',' << triples_field << ','
           << triples_series << ',' << triples_mat << ',' << triples_polymat << ','
           << triples_extfield << ',' << field_ops;
        return os.str();
    }
};

}  // namespace polydet

#endif
