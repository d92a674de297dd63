#ifndef POLYDET_PROTOCOLS_HPP
#define POLYDET_PROTOCOLS_HPP

#include "polydet/engine.hpp"

namespace polydet {

// Las Vegas certification sites draw this many candidates per round pair, so
// a site only costs extra rounds if all of them fail at once (probability
// about (2/q)^kCertBatch).  Keeps protocol round counts flat across seeds.
constexpr std::size_t kCertBatch = 6;
constexpr int kMaxCertBatches = 4;

template <class R>
Shared<typename R::Elem> shared_public(const R& ring, const typename R::Elem& v, int n) {
    Shared<typename R::Elem> out;
    out.v.assign(n, ring.zero());
    out.v[0] = v;
    return out;
}

template <class R>
Shared<typename R::Elem> scale_public(Ctx& ctx, const R& ring, const typename R::Elem& c,
                                      const Shared<typename R::Elem>& a) {
    Shared<typename R::Elem> out;
    out.v.reserve(a.v.size());
    for (int p = 0; p < ctx.players(); ++p)
        ctx.local(p, [&] { out.v.push_back(ring.mul(c, a.v[p])); });
    return out;
}

template <class R>
Shared<typename R::Elem> shared_add(Ctx& ctx, const R& ring, const Shared<typename R::Elem>& a,
                                    const Shared<typename R::Elem>& b) {
    Shared<typename R::Elem> out;
    for (int p = 0; p < ctx.players(); ++p)
        ctx.local(p, [&] { out.v.push_back(ring.add(a.v[p], b.v[p])); });
    return out;
}

// ---------------------------------------------------------------------------
// Reveal: everyone broadcasts its share, everyone sums.  One round.
// ---------------------------------------------------------------------------

template <class R>
std::vector<typename R::Elem> reveal_batch(Ctx& ctx, const R& ring,
                                           const std::vector<Shared<typename R::Elem>>& vs,
                                           const std::string& tag) {
    if (vs.empty()) return {};
    ctx.symmetric_round(u64(vs.size()) * ring.elem_bits(), tag);
    std::vector<typename R::Elem> out;
    out.reserve(vs.size());
    local_all(ctx, [&] {
        for (const auto& v : vs) out.push_back(reconstruct(ring, v));
    });
    return out;
}

template <class R>
typename R::Elem reveal(Ctx& ctx, const R& ring, const Shared<typename R::Elem>& v,
                        const std::string& tag) {
    return reveal_batch(ctx, ring, {v}, tag)[0];
}

// ---------------------------------------------------------------------------
// Beaver multiplication.  Both masked differences of the whole batch go out
// in a single round; the public d*e term is added by player 1 alone.  The
// operand order d*[z], [y]*e, d*e is kept, so the same code is sound over
// noncommutative rings (matrices).
// ---------------------------------------------------------------------------

template <class R>
std::vector<Shared<typename R::Elem>> beaver_mul_batch(
    Ctx& ctx, const R& ring, const std::vector<Shared<typename R::Elem>>& as,
    const std::vector<Shared<typename R::Elem>>& bs, const std::string& tag) {
    using E = typename R::Elem;
    if (as.size() != bs.size()) throw protocol_bug("beaver_mul_batch: operand count mismatch");
    if (as.empty()) return {};
    std::size_t k = as.size();
    int n = ctx.players();

    std::vector<BeaverTriple<E>> tr;
    tr.reserve(k);
    for (std::size_t j = 0; j < k; ++j) tr.push_back(ctx.store().take(ring, ctx.meter));

    std::vector<Shared<E>> dsh(k), esh(k);
    for (std::size_t j = 0; j < k; ++j) {
        dsh[j].v.reserve(n);
        esh[j].v.reserve(n);
    }
    for (int p = 0; p < n; ++p)
        ctx.local(p, [&] {
            for (std::size_t j = 0; j < k; ++j) {
                dsh[j].v.push_back(ring.sub(as[j].v[p], tr[j].y.v[p]));
                esh[j].v.push_back(ring.sub(bs[j].v[p], tr[j].z.v[p]));
            }
        });

    ctx.symmetric_round(2 * u64(k) * ring.elem_bits(), tag);
    std::vector<E> d(k), e(k);
    local_all(ctx, [&] {
        for (std::size_t j = 0; j < k; ++j) {
            d[j] = reconstruct(ring, dsh[j]);
            e[j] = reconstruct(ring, esh[j]);
        }
    });
    if constexpr (std::is_same_v<R, FieldRing>) {
        if (ctx.reveal_log)
            for (std::size_t j = 0; j < k; ++j) {
                ctx.reveal_log->push_back({d[j], "d"});
                ctx.reveal_log->push_back({e[j], "e"});
            }
    }

    std::vector<Shared<E>> out(k);
    for (std::size_t j = 0; j < k; ++j) out[j].v.reserve(n);
    for (int p = 0; p < n; ++p)
        ctx.local(p, [&] {
            for (std::size_t j = 0; j < k; ++j) {
                E r = ring.add(tr[j].x.v[p],
                               ring.add(ring.mul(d[j], tr[j].z.v[p]), ring.mul(tr[j].y.v[p], e[j])));
                if (p == 0) r = ring.add(r, ring.mul(d[j], e[j]));
                out[j].v.push_back(std::move(r));
            }
        });
    return out;
}

template <class R>
Shared<typename R::Elem> beaver_mul(Ctx& ctx, const R& ring, const Shared<typename R::Elem>& a,
                                    const Shared<typename R::Elem>& b, const std::string& tag) {
    return beaver_mul_batch(ctx, ring, {a}, {b}, tag)[0];
}

// ---------------------------------------------------------------------------
// Matrix product of shared matrices.  Over the prime field this is one
// Beaver step with a matrix triple; over the residue field (no matrix kind)
// the n^3 entry products run as one batch of scalar triples.
// ---------------------------------------------------------------------------

template <class R>
Shared<Matrix<typename R::Elem>> mat_mul_shared(Ctx& ctx, const R& ring,
                                                const Shared<Matrix<typename R::Elem>>& a,
                                                const Shared<Matrix<typename R::Elem>>& b,
                                                const std::string& tag) {
    using E = typename R::Elem;
    std::size_t n = a.v[0].n;
    if (b.v[0].n != n) throw domain_error("mat_mul_shared: dimension mismatch");
    if constexpr (has_matrix_triples<R>) {
        MatrixRing mr{ring.f, n};
        return beaver_mul(ctx, mr, a, b, tag);
    } else {
        std::vector<Shared<E>> as, bs;
        as.reserve(n * n * n);
        bs.reserve(n * n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    Shared<E> sa, sb;
                    for (int p = 0; p < ctx.players(); ++p) {
                        sa.v.push_back(a.v[p].at(i, k));
                        sb.v.push_back(b.v[p].at(k, j));
                    }
                    as.push_back(std::move(sa));
                    bs.push_back(std::move(sb));
                }
        auto prods = beaver_mul_batch(ctx, ring, as, bs, tag);
        Shared<Matrix<E>> out;
        for (int p = 0; p < ctx.players(); ++p)
            ctx.local(p, [&] {
                Matrix<E> mp(n, ring.zero());
                std::size_t idx = 0;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        for (std::size_t k = 0; k < n; ++k)
                            mp.at(i, j) = ring.add(mp.at(i, j), prods[idx++].v[p]);
                out.v.push_back(std::move(mp));
            });
        return out;
    }
}

// Polynomial-matrix product: one Beaver step with a polymat triple; the
// result is the exact product in K[X] (degree up to 2d), callers working mod
// X^m truncate afterwards.
inline Shared<Matrix<Poly>> mul_polymat(Ctx& ctx, const PolyMatrixRing& ring,
                                        const Shared<Matrix<Poly>>& a,
                                        const Shared<Matrix<Poly>>& b) {
    for (const auto& sh : {std::cref(a), std::cref(b)})
        for (const auto& mp : sh.get().v)
            for (const auto& p : mp.e)
                if (p.degree() > ring.d)
                    throw domain_error("mul_polymat: operand exceeds the triple's degree bound");
    return beaver_mul(ctx, ring, a, b, "mulpolymat");
}

inline void truncate_shared_polymat(Ctx& ctx, Shared<Matrix<Poly>>& a, std::size_t m) {
    for (auto& mp : a.v)
        for (auto& p : mp.e) p = poly_mod_xk(p, m);
    (void)ctx;  // truncation is free: no field ops, no communication
}

// ---------------------------------------------------------------------------
// Certified random units.  A candidate stays secret; only its product with a
// fresh random mask is revealed, so success leaks nothing but unit-ness.
// ---------------------------------------------------------------------------

namespace detail {

// Generic batched Las Vegas skeleton: `make` draws one candidate, `attempt`
// runs the batched interaction and returns per-candidate success flags plus
// payloads.  Shared by the unit/pair generators below.
inline void note_retries(CostMeter& meter, std::size_t burned) { meter.retries += burned; }

}  // namespace detail

// Uniform invertible elements of a field-like ring (prime or extension
// field): draw u, reveal u*t for fresh random t, keep u when the product is
// a unit.
template <class R>
std::vector<Shared<typename R::Elem>> rand_units(Ctx& ctx, const R& ring, std::size_t count,
                                                 const std::string& tag) {
    using E = typename R::Elem;
    std::vector<Shared<E>> out(count);
    std::vector<std::size_t> pending(count);
    for (std::size_t i = 0; i < count; ++i) pending[i] = i;
    for (int batch = 0; batch < kMaxCertBatches && !pending.empty(); ++batch) {
        std::vector<Shared<E>> us, ts;
        us.reserve(pending.size() * kCertBatch);
        ts.reserve(pending.size() * kCertBatch);
        for (std::size_t i = 0; i < pending.size() * kCertBatch; ++i) {
            us.push_back(rand_share(ring, ctx.st->player_rng));
            ts.push_back(rand_share(ring, ctx.st->player_rng));
        }
        auto prods = beaver_mul_batch(ctx, ring, us, ts, tag);
        auto w = reveal_batch(ctx, ring, prods, tag);
        std::vector<std::size_t> still;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            bool done = false;
            for (std::size_t c = 0; c < kCertBatch; ++c)
                if (ring.is_unit(w[i * kCertBatch + c])) {
                    out[pending[i]] = std::move(us[i * kCertBatch + c]);
                    detail::note_retries(ctx.meter, c);
                    done = true;
                    break;
                }
            if (!done) {
                detail::note_retries(ctx.meter, kCertBatch);
                still.push_back(pending[i]);
            }
        }
        pending = std::move(still);
    }
    if (!pending.empty()) throw protocol_bug("rand_units: certification kept failing");
    return out;
}

// Uniform units of the truncated series ring: only the constant term needs
// certifying, which costs field triples rather than series triples.
inline std::vector<Shared<Series>> rand_unit_series(Ctx& ctx, const SeriesBeaverRing& ring,
                                                    std::size_t count, const std::string& tag) {
    FieldRing fr{ring.r.f};
    std::vector<Shared<Series>> out(count);
    std::vector<std::size_t> pending(count);
    for (std::size_t i = 0; i < count; ++i) pending[i] = i;
    for (int batch = 0; batch < kMaxCertBatches && !pending.empty(); ++batch) {
        std::vector<Shared<Series>> us;
        std::vector<Shared<u64>> c0s, ts;
        for (std::size_t i = 0; i < pending.size() * kCertBatch; ++i) {
            us.push_back(rand_share(ring, ctx.st->player_rng));
            Shared<u64> c0;
            for (int p = 0; p < ctx.players(); ++p) c0.v.push_back(us.back().v[p][0]);
            c0s.push_back(std::move(c0));
            ts.push_back(ctx.rand_field_share());
        }
        auto prods = beaver_mul_batch(ctx, fr, c0s, ts, tag);
        auto w = reveal_batch(ctx, fr, prods, tag);
        std::vector<std::size_t> still;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            bool done = false;
            for (std::size_t c = 0; c < kCertBatch; ++c)
                if (w[i * kCertBatch + c] != 0) {
                    out[pending[i]] = std::move(us[i * kCertBatch + c]);
                    detail::note_retries(ctx.meter, c);
                    done = true;
                    break;
                }
            if (!done) {
                detail::note_retries(ctx.meter, kCertBatch);
                still.push_back(pending[i]);
            }
        }
        pending = std::move(still);
    }
    if (!pending.empty()) throw protocol_bug("rand_unit_series: certification kept failing");
    return out;
}

// A random unit of series(m); m=1 degenerates to a nonzero field element.
inline Shared<Series> rand_poly_inv(Ctx& ctx, const SeriesBeaverRing& ring) {
    return rand_unit_series(ctx, ring, 1, "randpolyinv")[0];
}

// A unit together with its inverse: reveal w = r*s for random r, s; a unit w
// certifies both factors and gives r^{-1} = w^{-1}*s for free.
template <class R>
struct UnitPair {
    Shared<typename R::Elem> r, r_inv;
};

template <class R>
std::vector<UnitPair<R>> rand_unit_pairs(Ctx& ctx, const R& ring, std::size_t count,
                                         const std::string& tag) {
    using E = typename R::Elem;
    std::vector<UnitPair<R>> out(count);
    std::vector<std::size_t> pending(count);
    for (std::size_t i = 0; i < count; ++i) pending[i] = i;
    for (int batch = 0; batch < kMaxCertBatches && !pending.empty(); ++batch) {
        std::vector<Shared<E>> rs, ss;
        for (std::size_t i = 0; i < pending.size() * kCertBatch; ++i) {
            rs.push_back(rand_share(ring, ctx.st->player_rng));
            ss.push_back(rand_share(ring, ctx.st->player_rng));
        }
        auto prods = beaver_mul_batch(ctx, ring, rs, ss, tag);
        auto w = reveal_batch(ctx, ring, prods, tag);
        std::vector<std::size_t> still;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            bool done = false;
            for (std::size_t c = 0; c < kCertBatch; ++c) {
                std::size_t at = i * kCertBatch + c;
                if (ring.is_unit(w[at])) {
                    E winv = local_all(ctx, [&] { return ring.inv(w[at]); });
                    out[pending[i]].r = std::move(rs[at]);
                    out[pending[i]].r_inv = scale_public(ctx, ring, winv, ss[at]);
                    detail::note_retries(ctx.meter, c);
                    done = true;
                    break;
                }
            }
            if (!done) {
                detail::note_retries(ctx.meter, kCertBatch);
                still.push_back(pending[i]);
            }
        }
        pending = std::move(still);
    }
    if (!pending.empty()) throw protocol_bug("rand_unit_pairs: certification kept failing");
    return out;
}

// ---------------------------------------------------------------------------
// Masked inversion (Bar-Ilan/Beaver style): reveal a*r, invert the public
// value.  The only information revealed is whether the secret is a unit.
// ---------------------------------------------------------------------------

template <class R>
Shared<typename R::Elem> inverse_unit(Ctx& ctx, const R& ring,
                                      const Shared<typename R::Elem>& a) {
    using E = typename R::Elem;
    for (int batch = 0; batch < kMaxCertBatches; ++batch) {
        std::vector<Shared<E>> rs, as;
        for (std::size_t c = 0; c < kCertBatch; ++c) {
            rs.push_back(rand_share(ring, ctx.st->player_rng));
            as.push_back(a);
        }
        auto prods = beaver_mul_batch(ctx, ring, as, rs, "inv.w");
        auto w = reveal_batch(ctx, ring, prods, "inv.w");
        for (std::size_t c = 0; c < kCertBatch; ++c)
            if (ring.is_unit(w[c])) {
                detail::note_retries(ctx.meter, c);
                E winv = local_all(ctx, [&] { return ring.inv(w[c]); });
                return scale_public(ctx, ring, winv, rs[c]);
            }
        detail::note_retries(ctx.meter, kCertBatch);
    }
    // Every mask failing means the secret itself is not a unit; saying so is
    // an inherent leak of the masked protocol.
    throw leak_signal("inverse: secret is zero");
}

inline Shared<u64> inverse_field(Ctx& ctx, const FieldRing& ring, const Shared<u64>& a) {
    return inverse_unit(ctx, ring, a);
}

// Series inversion via a certified unit mask: w = a*r is revealed, Newton
// inversion of the public w stays local, the output is w^{-1}*[r].
inline Shared<Series> inverse_series(Ctx& ctx, const SeriesBeaverRing& ring,
                                     const Shared<Series>& a) {
    Shared<Series> r = rand_poly_inv(ctx, ring);
    auto wsh = beaver_mul(ctx, ring, a, r, "invser.w");
    Series w = reveal(ctx, ring, wsh, "invser.w");
    if (!ring.is_unit(w)) throw leak_signal("inverse_series: secret non-unit");
    Series winv = local_all(ctx, [&] { return ring.inv(w); });
    return scale_public(ctx, ring, winv, r);
}

// ---------------------------------------------------------------------------
// Fan-in product of t shared units in rounds independent of t: telescoping
// masks y_j = r_{j-1} x_j r_j^{-1}, public P = prod y_j = r_0 (prod x) r_t^{-1},
// then one Beaver step to strip the masks.
// ---------------------------------------------------------------------------

template <class R>
Shared<typename R::Elem> fan_in_mul(Ctx& ctx, const R& ring,
                                    const std::vector<Shared<typename R::Elem>>& xs,
                                    Shared<typename R::Elem>* inv_out = nullptr) {
    using E = typename R::Elem;
    int n = ctx.players();
    if (xs.empty()) {
        auto one = shared_public(ring, ring.one(), n);
        if (inv_out) *inv_out = one;
        return one;
    }
    std::size_t t = xs.size();
    auto pairs = rand_unit_pairs(ctx, ring, t + 1, "fanin.pair");

    std::vector<Shared<E>> lhs, rhs;
    for (std::size_t j = 0; j < t; ++j) {
        lhs.push_back(pairs[j].r);
        rhs.push_back(xs[j]);
    }
    auto masked = beaver_mul_batch(ctx, ring, lhs, rhs, "fanin.mask1");
    std::vector<Shared<E>> rinvs;
    for (std::size_t j = 0; j < t; ++j) rinvs.push_back(pairs[j + 1].r_inv);
    auto ysh = beaver_mul_batch(ctx, ring, masked, rinvs, "fanin.mask2");
    auto y = reveal_batch(ctx, ring, ysh, "fanin.y");
    for (const auto& v : y)
        if (!ring.is_unit(v)) throw leak_signal("fan_in_mul: non-unit operand");

    E prod = local_all(ctx, [&] {
        E acc = ring.one();
        for (const auto& v : y) acc = ring.mul(acc, v);
        return acc;
    });

    auto final_lhs = scale_public(ctx, ring, prod, pairs[0].r_inv);
    if (!inv_out) return beaver_mul(ctx, ring, final_lhs, pairs[t].r, "fanin.final");

    E prod_inv = local_all(ctx, [&] { return ring.inv(prod); });
    auto final_lhs_inv = scale_public(ctx, ring, prod_inv, pairs[0].r);
    auto res = beaver_mul_batch(ctx, ring, {final_lhs, final_lhs_inv},
                                {pairs[t].r, pairs[t].r_inv}, "fanin.final");
    *inv_out = std::move(res[1]);
    return res[0];
}

// ---------------------------------------------------------------------------
// Random invertible matrix H = U*L with certified-unit diagonals; det H is
// the fan-in product of the 2n diagonal entries.
// ---------------------------------------------------------------------------

template <class R>
struct RandInvMatResult {
    Shared<Matrix<typename R::Elem>> h;
    Shared<typename R::Elem> det_h;
    bool has_det = false;
};

template <class R>
RandInvMatResult<R> rand_inv_mat(Ctx& ctx, const R& ring, std::size_t n, bool want_det = true) {
    using E = typename R::Elem;
    auto diag = rand_units(ctx, ring, 2 * n, "rim.diag");

    Shared<Matrix<E>> u, l;
    for (int p = 0; p < ctx.players(); ++p) {
        Matrix<E> up(n, ring.zero()), lp(n, ring.zero());
        for (std::size_t i = 0; i < n; ++i) {
            up.at(i, i) = diag[i].v[p];
            lp.at(i, i) = diag[n + i].v[p];
            for (std::size_t j = i + 1; j < n; ++j) {
                up.at(i, j) = ring.random(ctx.prng(p));
                lp.at(j, i) = ring.random(ctx.prng(p));
            }
        }
        u.v.push_back(std::move(up));
        l.v.push_back(std::move(lp));
    }

    RandInvMatResult<R> out;
    out.has_det = want_det;
    std::vector<std::function<void(Ctx&)>> subs;
    subs.push_back([&](Ctx& c) { out.h = mat_mul_shared(c, ring, u, l, "rim.mul"); });
    if (want_det) subs.push_back([&](Ctx& c) { out.det_h = fan_in_mul(c, ring, diag); });
    par_compose(ctx, subs);
    return out;
}

// Random element of R* (polynomial matrix with invertible constant
// coefficient): X times a random matrix of degree < d plus an invertible
// constant matrix.
inline Shared<Matrix<Poly>> rand_inv_polymat(Ctx& ctx, const PrimeField& f, std::size_t n,
                                             int d) {
    FieldRing fr{f};
    auto g = rand_inv_mat(ctx, fr, n, /*want_det=*/false).h;
    Shared<Matrix<Poly>> out;
    for (int p = 0; p < ctx.players(); ++p) {
        Matrix<Poly> mp(n, Poly{});
        for (std::size_t i = 0; i < mp.e.size(); ++i) {
            std::vector<u64> c(std::size_t(d) + 1, 0);
            c[0] = g.v[p].e[i];
            for (int j = 1; j <= d; ++j) c[j] = f.random(ctx.prng(p));
            mp.e[i] = Poly(std::move(c));
        }
        out.v.push_back(std::move(mp));
    }
    return out;
}

}  // namespace polydet

#endif
