#ifndef POLYDET_TRIPLES_HPP
#define POLYDET_TRIPLES_HPP

#include "polydet/protocols.hpp"

namespace polydet {

// ---------------------------------------------------------------------------
// Dealer-side generation: the trusted oracle samples y, z uniformly, computes
// x = y*z in the ring and deals all three.  Out-of-band: zero rounds, zero
// broadcast bits, arithmetic not attributed to any player.
// ---------------------------------------------------------------------------

template <class R>
BeaverTriple<typename R::Elem> deal_triple(EngineState& st, const R& ring) {
    auto y = ring.random(st.dealer.stream());
    auto z = ring.random(st.dealer.stream());
    auto x = ring.mul(y, z);
    BeaverTriple<typename R::Elem> t;
    t.x = make_shared_value(ring, x, st.n_players, st.dealer.stream());
    t.y = make_shared_value(ring, y, st.n_players, st.dealer.stream());
    t.z = make_shared_value(ring, z, st.n_players, st.dealer.stream());
    return t;
}

template <class R>
void deal_triples(EngineState& st, const R& ring, u64 count) {
    for (u64 i = 0; i < count; ++i) st.store.put(ring, deal_triple(st, ring));
}

inline void bt_field_dealer(EngineState& st, u64 count) {
    deal_triples(st, FieldRing{st.field}, count);
}

inline void bt_extfield_dealer(EngineState& st, const ExtField& ef, u64 count) {
    deal_triples(st, ExtFieldRing{ef}, count);
}

// ---------------------------------------------------------------------------
// Interactive bootstrap of composite kinds from lower kinds.
// ---------------------------------------------------------------------------

// Series triple from 2m-1 pointwise field multiplications: evaluate the
// shared factors at 0..2m-2 (local), Beaver-multiply all points in one
// round, interpolate the product shares, truncate mod X^m.
inline BeaverTriple<Series> bt_poly(Ctx& ctx, std::size_t m) {
    const PrimeField& f = ctx.field();
    if (f.modulus() <= 2 * m) throw domain_error("bt_poly: need q > 2m evaluation points");
    SeriesBeaverRing sr{SeriesRing{f, m}};
    auto y = rand_share(sr, ctx.st->player_rng);
    auto z = rand_share(sr, ctx.st->player_rng);

    std::size_t k = 2 * m - 1;
    std::vector<u64> xs(k);
    for (std::size_t j = 0; j < k; ++j) xs[j] = j;

    auto eval_series = [&](const Series& s, u64 x) {
        u64 acc = 0;
        for (std::size_t i = s.size(); i-- > 0;) acc = f.add(f.mul(acc, x), s[i]);
        return acc;
    };

    std::vector<Shared<u64>> ye(k), ze(k);
    for (int p = 0; p < ctx.players(); ++p)
        ctx.local(p, [&] {
            for (std::size_t j = 0; j < k; ++j) {
                ye[j].v.push_back(eval_series(y.v[p], xs[j]));
                ze[j].v.push_back(eval_series(z.v[p], xs[j]));
            }
        });

    auto prods = beaver_mul_batch(ctx, FieldRing{f}, ye, ze, "btpoly");

    BeaverTriple<Series> t;
    t.y = std::move(y);
    t.z = std::move(z);
    for (int p = 0; p < ctx.players(); ++p)
        ctx.local(p, [&] {
            std::vector<u64> ys(k);
            for (std::size_t j = 0; j < k; ++j) ys[j] = prods[j].v[p];
            t.x.v.push_back(sr.r.from_poly(lagrange_interpolate(f, xs, ys)));
        });
    return t;
}

// Matrix triple from n^3 field triples: every entry of X = Y*Z is an inner
// product of n scalar Beaver multiplications, all in one round.
inline BeaverTriple<Matrix<u64>> bt_mat(Ctx& ctx, std::size_t n) {
    const PrimeField& f = ctx.field();
    FieldRing fr{f};
    MatrixRing mr{f, n};
    auto y = rand_share(mr, ctx.st->player_rng);
    auto z = rand_share(mr, ctx.st->player_rng);

    std::vector<Shared<u64>> as, bs;
    as.reserve(n * n * n);
    bs.reserve(n * n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Shared<u64> sa, sb;
                for (int p = 0; p < ctx.players(); ++p) {
                    sa.v.push_back(y.v[p].at(i, k));
                    sb.v.push_back(z.v[p].at(k, j));
                }
                as.push_back(std::move(sa));
                bs.push_back(std::move(sb));
            }
    auto prods = beaver_mul_batch(ctx, fr, as, bs, "btmat");

    BeaverTriple<Matrix<u64>> t;
    t.y = std::move(y);
    t.z = std::move(z);
    for (int p = 0; p < ctx.players(); ++p)
        ctx.local(p, [&] {
            Matrix<u64> xp(n, 0);
            std::size_t idx = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k)
                        xp.at(i, j) = f.add(xp.at(i, j), prods[idx++].v[p]);
            t.x.v.push_back(std::move(xp));
        });
    return t;
}

// Polynomial-matrix triple by evaluation/interpolation at 1..2d+1: one
// matrix Beaver multiplication per point, all points in one round; the x
// part is the exact product of degree up to 2d.
inline BeaverTriple<Matrix<Poly>> bt_polymat(Ctx& ctx, std::size_t n, int d) {
    const PrimeField& f = ctx.field();
    std::size_t k = 2 * std::size_t(d) + 1;
    if (f.modulus() <= k) throw domain_error("bt_polymat: need q > 2d+1 evaluation points");
    PolyMatrixRing pr{f, n, d};
    MatrixRing mr{f, n};
    auto y = rand_share(pr, ctx.st->player_rng);
    auto z = rand_share(pr, ctx.st->player_rng);

    std::vector<u64> xs(k);
    for (std::size_t j = 0; j < k; ++j) xs[j] = j + 1;

    std::vector<Shared<Matrix<u64>>> ye(k), ze(k);
    for (int p = 0; p < ctx.players(); ++p)
        ctx.local(p, [&] {
            for (std::size_t j = 0; j < k; ++j) {
                ye[j].v.push_back(polymatrix_eval(f, y.v[p], xs[j]));
                ze[j].v.push_back(polymatrix_eval(f, z.v[p], xs[j]));
            }
        });

    auto prods = beaver_mul_batch(ctx, mr, ye, ze, "btpolymat");

    BeaverTriple<Matrix<Poly>> t;
    t.y = std::move(y);
    t.z = std::move(z);
    for (int p = 0; p < ctx.players(); ++p)
        ctx.local(p, [&] {
            std::vector<Matrix<u64>> vals(k);
            for (std::size_t j = 0; j < k; ++j) vals[j] = prods[j].v[p];
            t.x.v.push_back(lagrange_interpolate(f, xs, vals).m);
        });
    return t;
}

}  // namespace polydet

#endif
