#ifndef POLYDET_SHARING_HPP
#define POLYDET_SHARING_HPP

#include <span>

#include "polydet/rings.hpp"

namespace polydet {

// One player's additive share.  Owners are 1-based player indices; the N
// values of one secret sum to the secret in the ring.
template <class T>
struct Share {
    int owner = 0;
    T value{};
};

// Dense per-player view of a shared value, indexed 0..N-1, used by the
// protocol simulator.
template <class T>
struct Shared {
    std::vector<T> v;

    int players() const { return static_cast<int>(v.size()); }
};

template <class R>
Shared<typename R::Elem> make_shared_value(const R& ring, const typename R::Elem& secret, int n,
                                           Rng& rng) {
    if (n < 2) throw domain_error("deal: need at least 2 players");
    Shared<typename R::Elem> out;
    out.v.reserve(n);
    typename R::Elem acc = ring.zero();
    for (int i = 0; i < n - 1; ++i) {
        auto r = ring.random(rng);
        acc = ring.add(acc, r);
        out.v.push_back(std::move(r));
    }
    out.v.push_back(ring.sub(secret, acc));
    return out;
}

template <class R>
typename R::Elem reconstruct(const R& ring, const Shared<typename R::Elem>& s) {
    typename R::Elem acc = ring.zero();
    for (const auto& v : s.v) acc = ring.add(acc, v);
    return acc;
}

// A trusted dealer with a replayable seed: identical seed, identical shares.
class Dealer {
  public:
    Dealer(u64 master_seed, PrimeField field)
        : field_(field), rng_(make_stream(master_seed, 0x6465616cULL)) {}

    const PrimeField& field() const { return field_; }
    Rng& stream() { return rng_; }

    template <class R>
    std::vector<Share<typename R::Elem>> deal(const R& ring, const typename R::Elem& secret,
                                              int n) {
        auto dense = make_shared_value(ring, secret, n, rng_);
        std::vector<Share<typename R::Elem>> out(n);
        for (int i = 0; i < n; ++i) out[i] = {i + 1, std::move(dense.v[i])};
        return out;
    }

  private:
    PrimeField field_;
    Rng rng_;
};

template <class R>
typename R::Elem reconstruct(const R& ring, std::span<const Share<typename R::Elem>> shares) {
    if (shares.empty()) throw domain_error("reconstruct: no shares");
    std::vector<bool> seen;
    typename R::Elem acc = ring.zero();
    for (const auto& s : shares) {
        if (s.owner < 1) throw domain_error("reconstruct: invalid owner");
        if (std::size_t(s.owner) > seen.size()) seen.resize(s.owner, false);
        if (seen[s.owner - 1]) throw domain_error("reconstruct: duplicate owner");
        seen[s.owner - 1] = true;
        acc = ring.add(acc, s.value);
    }
    for (bool b : seen)
        if (!b) throw domain_error("reconstruct: missing owner");
    return acc;
}

template <class R>
typename R::Elem reconstruct(const R& ring, const std::vector<Share<typename R::Elem>>& shares) {
    return reconstruct(ring, std::span<const Share<typename R::Elem>>(shares));
}

// Local linear operations; reconstruction commutes with each of them.
template <class R>
Share<typename R::Elem> share_add(const R& ring, const Share<typename R::Elem>& a,
                                  const Share<typename R::Elem>& b) {
    if (a.owner != b.owner) throw domain_error("share_add: owner mismatch");
    return {a.owner, ring.add(a.value, b.value)};
}

template <class R>
Share<typename R::Elem> share_sub(const R& ring, const Share<typename R::Elem>& a,
                                  const Share<typename R::Elem>& b) {
    if (a.owner != b.owner) throw domain_error("share_sub: owner mismatch");
    return {a.owner, ring.sub(a.value, b.value)};
}

template <class R>
Share<typename R::Elem> share_scale_public(const R& ring, const Share<typename R::Elem>& a,
                                           const typename R::Elem& c) {
    return {a.owner, ring.mul(a.value, c)};
}

// Evaluation of a shared polynomial matrix at a public point is local:
// sum_i [A]_i(alpha) = A(alpha).
inline Share<Matrix<u64>> share_polymatrix_eval(const PrimeField& f,
                                                const Share<Matrix<Poly>>& a, u64 alpha) {
    return {a.owner, polymatrix_eval(f, a.value, alpha)};
}

// Interpolation through public abscissae is local as well: each player
// interpolates its own shares.
inline Share<Matrix<Poly>> share_interpolate_public(
    const PrimeField& f, const std::vector<u64>& xs,
    const std::vector<Share<Matrix<u64>>>& points) {
    if (points.empty()) throw domain_error("share_interpolate_public: no points");
    int owner = points[0].owner;
    std::vector<Matrix<u64>> vals;
    vals.reserve(points.size());
    for (const auto& p : points) {
        if (p.owner != owner) throw domain_error("share_interpolate_public: owner mismatch");
        vals.push_back(p.value);
    }
    return {owner, lagrange_interpolate(f, xs, vals).m};
}

// Non-interactive randomness: every player draws its own share from its own
// stream; the sum is uniform over the ring.
template <class R>
Shared<typename R::Elem> rand_share(const R& ring, std::vector<Rng>& player_rng) {
    Shared<typename R::Elem> out;
    out.v.reserve(player_rng.size());
    for (auto& rng : player_rng) out.v.push_back(ring.random(rng));
    return out;
}

}  // namespace polydet

#endif
