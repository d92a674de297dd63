#ifndef POLYDET_DETERMINANT_HPP
#define POLYDET_DETERMINANT_HPP

#include "polydet/protocols.hpp"

namespace polydet {

// Spare interpolation points drawn up front.  Every instance runs in
// parallel and the first n+1 that did not hit an eigenvalue are combined, so
// an eigenvalue collision costs extra triples, never extra rounds.
constexpr std::size_t kExtraPoints = 8;

namespace detail {

inline u64 saturating_pow(u64 base, u64 exp, u64 cap) {
    u64 r = 1;
    for (u64 i = 0; i < exp; ++i) {
        if (r > cap / base) return cap;
        r *= base;
    }
    return r;
}

template <class R>
std::size_t general_point_count(const R& ring, std::size_t n) {
    u64 size;
    if constexpr (std::is_same_v<R, FieldRing>)
        size = ring.f.modulus();
    else
        size = saturating_pow(ring.ef.base().modulus(), ring.ef.extension_degree(), u64(1) << 62);
    if (size < n + 1) throw domain_error("determinant: field too small for n+1 distinct points");
    return std::size_t(std::min<u64>(n + 1 + kExtraPoints, size));
}

template <class R>
std::vector<typename R::Elem> distinct_public_points(Ctx& ctx, const R& ring, std::size_t count) {
    std::vector<typename R::Elem> out;
    while (out.size() < count) {
        auto cand = ring.random(ctx.public_coin());
        bool dup = false;
        for (const auto& v : out)
            if (v == cand) dup = true;
        if (!dup) out.push_back(std::move(cand));
    }
    return out;
}

// Share of z*I - A: the public z*I goes into player 1's share, every player
// negates its own share of A.
template <class R>
Shared<Matrix<typename R::Elem>> shift_matrix(Ctx& ctx, const R& ring,
                                              const Shared<Matrix<typename R::Elem>>& a,
                                              const typename R::Elem& z) {
    using E = typename R::Elem;
    std::size_t n = a.v[0].n;
    Shared<Matrix<E>> out;
    for (int p = 0; p < ctx.players(); ++p)
        ctx.local(p, [&] {
            Matrix<E> mp = mat_neg(ring, a.v[p]);
            if (p == 0)
                for (std::size_t i = 0; i < n; ++i) mp.at(i, i) = ring.add(mp.at(i, i), z);
            out.v.push_back(std::move(mp));
        });
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Constant-matrix determinant, invertible case: blind with a random
// invertible H of known determinant, reveal E = A*H, divide out det H.
// Generic over the prime field and the residue field K[X]/f.
// ---------------------------------------------------------------------------

template <class R>
struct DetAttempt {
    Shared<typename R::Elem> det;
    bool leaked = false;  // revealed determinant was zero (singular input)
};

template <class R>
DetAttempt<R> det_field_invertible_impl(Ctx& ctx, const R& ring,
                                        const Shared<Matrix<typename R::Elem>>& a) {
    using E = typename R::Elem;
    std::size_t n = a.v[0].n;
    auto rim = rand_inv_mat(ctx, ring, n, /*want_det=*/true);

    Shared<E> dinv;
    E e = ring.zero();
    par_compose(ctx, {
                         [&](Ctx& c) { dinv = inverse_unit(c, ring, rim.det_h); },
                         [&](Ctx& c) {
                             auto masked = mat_mul_shared(c, ring, a, rim.h, "dfi.mask");
                             std::vector<Shared<E>> entries(n * n);
                             for (std::size_t i = 0; i < n * n; ++i)
                                 for (int p = 0; p < c.players(); ++p)
                                     entries[i].v.push_back(masked.v[p].e[i]);
                             auto vals = reveal_batch(c, ring, entries, "dfi.E");
                             Matrix<E> em(n, ring.zero());
                             em.e = std::move(vals);
                             e = local_all(c, [&] { return det_gauss(ring, em); });
                         },
                     });

    DetAttempt<R> out;
    if (ring.is_zero(e)) {
        out.leaked = true;
        out.det = shared_public(ring, ring.zero(), ctx.players());
        return out;
    }
    out.det = scale_public(ctx, ring, e, dinv);
    return out;
}

template <class R>
Shared<typename R::Elem> det_field_invertible(Ctx& ctx, const R& ring,
                                              const Shared<Matrix<typename R::Elem>>& a) {
    auto r = det_field_invertible_impl(ctx, ring, a);
    if (r.leaked) throw leak_signal("det_field_invertible: singular input leaked");
    return r.det;
}

// ---------------------------------------------------------------------------
// General case: interpolate the characteristic polynomial P(z) = det(zI - A)
// through public points; det A = (-1)^n P(0).  All instances run in
// parallel; instances whose z hits an eigenvalue are discarded.
// ---------------------------------------------------------------------------

template <class R>
Shared<typename R::Elem> det_field_general(Ctx& ctx, const R& ring,
                                           const Shared<Matrix<typename R::Elem>>& a) {
    using E = typename R::Elem;
    std::size_t n = a.v[0].n;
    std::size_t total = detail::general_point_count(ring, n);
    auto zs = detail::distinct_public_points(ctx, ring, total);

    std::vector<DetAttempt<R>> att(total);
    std::vector<std::function<void(Ctx&)>> subs;
    for (std::size_t j = 0; j < total; ++j)
        subs.push_back([&, j](Ctx& c) {
            auto shifted = detail::shift_matrix(c, ring, a, zs[j]);
            att[j] = det_field_invertible_impl(c, ring, shifted);
        });
    par_compose(ctx, subs);

    std::vector<std::size_t> sel;
    for (std::size_t j = 0; j < total && sel.size() < n + 1; ++j)
        if (!att[j].leaked) sel.push_back(j);
    if (sel.size() < n + 1)
        throw error("det_field_general: too many z points hit eigenvalues; giving up");

    // Lagrange weights at 0 over the chosen points.
    std::vector<E> w = local_all(ctx, [&] {
        std::vector<E> ws;
        for (std::size_t j : sel) {
            E num = ring.one(), den = ring.one();
            for (std::size_t k : sel) {
                if (k == j) continue;
                num = ring.mul(num, ring.neg(zs[k]));
                den = ring.mul(den, ring.sub(zs[j], zs[k]));
            }
            ws.push_back(ring.mul(num, ring.inv(den)));
        }
        return ws;
    });

    Shared<E> out;
    for (int p = 0; p < ctx.players(); ++p)
        ctx.local(p, [&] {
            E acc = ring.zero();
            for (std::size_t i = 0; i < sel.size(); ++i)
                acc = ring.add(acc, ring.mul(w[i], att[sel[i]].det.v[p]));
            if (n % 2 == 1) acc = ring.neg(acc);
            out.v.push_back(std::move(acc));
        });
    return out;
}

// ---------------------------------------------------------------------------
// Method 1: evaluate the shared polynomial matrix at 0..nd (local), run the
// general constant-matrix determinant per point in parallel, interpolate
// the determinant shares (local).
// ---------------------------------------------------------------------------

inline Shared<Poly> det_eval_interpol(Ctx& ctx, const PrimeField& f,
                                      const Shared<Matrix<Poly>>& a, std::size_t n, int d) {
    if (f.modulus() <= u64(n) * u64(d))
        throw domain_error("det_eval_interpol: need q > n*d interpolation points");
    if (f.modulus() <= n) throw domain_error("det_eval_interpol: need q > n");
    FieldRing fr{f};
    std::size_t npts = n * std::size_t(d) + 1;
    std::vector<u64> xs(npts);
    for (std::size_t j = 0; j < npts; ++j) xs[j] = j;

    std::vector<Shared<Matrix<u64>>> evals(npts);
    for (int p = 0; p < ctx.players(); ++p)
        ctx.local(p, [&] {
            for (std::size_t j = 0; j < npts; ++j)
                evals[j].v.push_back(polymatrix_eval(f, a.v[p], xs[j]));
        });

    std::vector<Shared<u64>> dets(npts);
    std::vector<std::function<void(Ctx&)>> subs;
    for (std::size_t j = 0; j < npts; ++j)
        subs.push_back([&, j](Ctx& c) { dets[j] = det_field_general(c, fr, evals[j]); });
    par_compose(ctx, subs);

    Shared<Poly> out;
    for (int p = 0; p < ctx.players(); ++p)
        ctx.local(p, [&] {
            std::vector<u64> ys(npts);
            for (std::size_t j = 0; j < npts; ++j) ys[j] = dets[j].v[p];
            out.v.push_back(lagrange_interpolate(f, xs, ys));
        });
    return out;
}

// ---------------------------------------------------------------------------
// Mask triple for the mod-X^m methods: H = U*L triangular with certified
// unit-series diagonals, d_H the fan-in product of those diagonals.
// ---------------------------------------------------------------------------

struct MaskTriple {
    Shared<Matrix<Poly>> h;
    Shared<Series> d_h;
};

inline MaskTriple rand_mat_poly_det(Ctx& ctx, const PrimeField& f, std::size_t n,
                                    std::size_t m) {
    SeriesBeaverRing sr{SeriesRing{f, m}};
    auto diag = rand_unit_series(ctx, sr, 2 * n, "rmpd.diag");

    auto as_poly = [](const Series& s) { return Poly(std::vector<u64>(s.begin(), s.end())); };
    Shared<Matrix<Poly>> u, l;
    for (int p = 0; p < ctx.players(); ++p) {
        Matrix<Poly> up(n, Poly{}), lp(n, Poly{});
        for (std::size_t i = 0; i < n; ++i) {
            up.at(i, i) = as_poly(diag[i].v[p]);
            lp.at(i, i) = as_poly(diag[n + i].v[p]);
            for (std::size_t j = i + 1; j < n; ++j) {
                up.at(i, j) = as_poly(sr.random(ctx.prng(p)));
                lp.at(j, i) = as_poly(sr.random(ctx.prng(p)));
            }
        }
        u.v.push_back(std::move(up));
        l.v.push_back(std::move(lp));
    }

    MaskTriple out;
    par_compose(ctx, {
                         [&](Ctx& c) { out.d_h = fan_in_mul(c, sr, diag); },
                         [&](Ctx& c) {
                             PolyMatrixRing pr{f, n, int(m) - 1};
                             auto h = mul_polymat(c, pr, u, l);
                             truncate_shared_polymat(c, h, m);
                             out.h = std::move(h);
                         },
                     });
    return out;
}

// ---------------------------------------------------------------------------
// Method 2 (DetInv): valid when A(0) is invertible.  Blind with the mask
// triple, reveal E = A*H mod X^m, compute the public series determinant
// division-free, divide out d_H.
// ---------------------------------------------------------------------------

struct DetModxAttempt {
    Shared<Series> det;
    bool leaked = false;
};

inline DetModxAttempt det_modx_impl(Ctx& ctx, const PrimeField& f,
                                    const Shared<Matrix<Poly>>& a, std::size_t n,
                                    std::size_t m) {
    SeriesBeaverRing sr{SeriesRing{f, m}};
    auto mask = rand_mat_poly_det(ctx, f, n, m);

    Shared<Series> dinv;
    Series e;
    par_compose(ctx, {
                         [&](Ctx& c) { dinv = inverse_series(c, sr, mask.d_h); },
                         [&](Ctx& c) {
                             PolyMatrixRing pr{f, n, int(m) - 1};
                             auto masked = mul_polymat(c, pr, a, mask.h);
                             truncate_shared_polymat(c, masked, m);
                             std::vector<Shared<Series>> entries(n * n);
                             for (std::size_t i = 0; i < n * n; ++i)
                                 for (int p = 0; p < c.players(); ++p)
                                     entries[i].v.push_back(sr.r.from_poly(masked.v[p].e[i]));
                             auto vals = reveal_batch(c, sr, entries, "detinv.E");
                             Matrix<Series> em(n, sr.zero());
                             em.e = std::move(vals);
                             e = local_all(c, [&] { return berkowitz_det(sr, em); });
                         },
                     });

    DetModxAttempt out;
    if (!sr.is_unit(e)) {
        out.leaked = true;
        out.det = shared_public(sr, sr.zero(), ctx.players());
        return out;
    }
    out.det = scale_public(ctx, sr, e, dinv);
    return out;
}

inline Shared<Series> det_modx(Ctx& ctx, const PrimeField& f, const Shared<Matrix<Poly>>& a,
                               std::size_t n, int d) {
    auto r = det_modx_impl(ctx, f, a, n, n * std::size_t(d) + 1);
    if (r.leaked) throw leak_signal("det_modx: matrix is singular at X=0 (leaked)");
    return r.det;
}

// ---------------------------------------------------------------------------
// Method 2, general case: interpolate P(z) = det(z*I - A) through n+1 public
// series points with pairwise-distinct constant terms, combine at 0.
// ---------------------------------------------------------------------------

inline Shared<Series> det_modx_general(Ctx& ctx, const PrimeField& f,
                                       const Shared<Matrix<Poly>>& a, std::size_t n, int d) {
    if (f.modulus() <= n) throw domain_error("det_modx_general: need q > n");
    std::size_t m = n * std::size_t(d) + 1;
    SeriesBeaverRing sr{SeriesRing{f, m}};
    std::size_t total = std::size_t(std::min<u64>(n + 1 + kExtraPoints, f.modulus()));

    // Public z_j: uniform series whose constant terms are pairwise distinct,
    // so every difference z_j - z_k is a unit and the Lagrange weights exist.
    std::vector<Series> zs;
    std::vector<u64> c0s;
    while (zs.size() < total) {
        Series cand = sr.random(ctx.public_coin());
        bool dup = false;
        for (u64 c0 : c0s)
            if (c0 == cand[0]) dup = true;
        if (dup) continue;
        c0s.push_back(cand[0]);
        zs.push_back(std::move(cand));
    }

    std::vector<DetModxAttempt> att(total);
    std::vector<std::function<void(Ctx&)>> subs;
    for (std::size_t j = 0; j < total; ++j)
        subs.push_back([&, j](Ctx& c) {
            // z_j*I - A with series entries lifted to polynomials.
            Shared<Matrix<Poly>> shifted;
            Poly zp(std::vector<u64>(zs[j].begin(), zs[j].end()));
            for (int p = 0; p < c.players(); ++p)
                c.local(p, [&] {
                    Matrix<Poly> mp(n, Poly{});
                    for (std::size_t i = 0; i < n * n; ++i) mp.e[i] = poly_neg(f, a.v[p].e[i]);
                    if (p == 0)
                        for (std::size_t i = 0; i < n; ++i)
                            mp.at(i, i) = poly_add(f, mp.at(i, i), zp);
                    shifted.v.push_back(std::move(mp));
                });
            att[j] = det_modx_impl(c, f, shifted, n, m);
        });
    par_compose(ctx, subs);

    std::vector<std::size_t> sel;
    for (std::size_t j = 0; j < total && sel.size() < n + 1; ++j)
        if (!att[j].leaked) sel.push_back(j);
    if (sel.size() < n + 1)
        throw error("det_modx_general: too many z points hit eigenvalues; giving up");

    std::vector<Series> w = local_all(ctx, [&] {
        std::vector<Series> ws;
        for (std::size_t j : sel) {
            Series num = sr.one(), den = sr.one();
            for (std::size_t k : sel) {
                if (k == j) continue;
                num = sr.mul(num, sr.neg(zs[k]));
                den = sr.mul(den, sr.sub(zs[j], zs[k]));
            }
            ws.push_back(sr.mul(num, sr.inv(den)));
        }
        return ws;
    });

    Shared<Series> out;
    for (int p = 0; p < ctx.players(); ++p)
        ctx.local(p, [&] {
            Series acc = sr.zero();
            for (std::size_t i = 0; i < sel.size(); ++i)
                acc = sr.add(acc, sr.mul(w[i], att[sel[i]].det.v[p]));
            if (n % 2 == 1) acc = sr.neg(acc);
            out.v.push_back(std::move(acc));
        });
    return out;
}

// ---------------------------------------------------------------------------
// Method 3: reinterpret entries in K[X]/f for a public irreducible f of
// degree nd+1 and reuse the generic constant-matrix protocols.  Lifting is
// trivial because deg(det) <= nd < deg f.
// ---------------------------------------------------------------------------

// The modulus depends only on the master seed, so preprocessing can build
// extension-field triples for the very same f before the protocol runs.
inline Poly modf_modulus(const PrimeField& f, std::size_t degree, u64 master_seed) {
    Rng rng = make_stream(master_seed, 0x6d6f6466ULL);
    return irreducible_poly(f, int(degree), rng);
}

inline Shared<Poly> det_modf(Ctx& ctx, const PrimeField& f, const Shared<Matrix<Poly>>& a,
                             std::size_t n, int d) {
    std::size_t deg = n * std::size_t(d) + 1;
    ExtField ef(f, modf_modulus(f, deg, ctx.st->master_seed));
    ExtFieldRing er{ef};
    for (const auto& mp : a.v)
        for (const auto& p : mp.e)
            if (p.degree() >= int(deg)) throw domain_error("det_modf: entry degree too high");
    return det_field_general(ctx, er, a);
}

// ---------------------------------------------------------------------------
// Side-by-side run of the three methods on one input, with the cross-check
// that all reconstructions agree.
// ---------------------------------------------------------------------------

struct MethodReport {
    std::string protocol;
    CostMeter meter;
    Poly det;
};

inline std::vector<MethodReport> compare_methods(Ctx& ctx, const PrimeField& f,
                                                 const Shared<Matrix<Poly>>& a, std::size_t n,
                                                 int d) {
    std::vector<MethodReport> reports;
    auto run_child = [&](const std::string& name, auto&& fn) {
        Ctx c(*ctx.st);
        c.round_base = ctx.round_base + ctx.meter.rounds;
        c.reveal_log = ctx.reveal_log;
        Poly det = fn(c);
        reports.push_back({name, c.meter, std::move(det)});
        ctx.meter.rounds += c.meter.rounds;
        ctx.meter.absorb_costs(c.meter);
    };

    run_child("evalinterp", [&](Ctx& c) {
        return reconstruct(PolyRing{f}, det_eval_interpol(c, f, a, n, d));
    });
    run_child("modx", [&](Ctx& c) {
        SeriesRing sr{f, n * std::size_t(d) + 1};
        Series s = reconstruct(SeriesBeaverRing{sr}, det_modx(c, f, a, n, d));
        return sr.to_poly(s);
    });
    run_child("modf", [&](Ctx& c) {
        return reconstruct(PolyRing{f}, det_modf(c, f, a, n, d));
    });

    for (const auto& r : reports)
        if (!(r.det == reports[0].det))
            throw protocol_bug("compare_methods: methods disagree on the determinant");
    return reports;
}

}  // namespace polydet

#endif
