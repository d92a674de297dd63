#ifndef POLYDET_ENGINE_HPP
#define POLYDET_ENGINE_HPP

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <ostream>
#include <type_traits>

#include "polydet/sharing.hpp"

namespace polydet {

// One broadcast event; replaying with the same seed reproduces the list
// byte-for-byte.
struct TranscriptEvent {
    u64 round;
    int sender;  // 1-based
    std::string tag;
    u64 bits;

    bool operator==(const TranscriptEvent&) const = default;
};

inline void write_transcript_jsonl(std::ostream& os, const std::vector<TranscriptEvent>& t) {
    for (const auto& e : t)
        os << "{\"round\":" << e.round << ",\"sender\":" << e.sender << ",\"tag\":\"" << e.tag
           << "\",\"bits\":" << e.bits << "}\n";
}

// The three complexity measures we track plus triple accounting.  "Per
// player" figures are reported as the maximum over players.
struct CostMeter {
    u64 rounds = 0;
    std::vector<u64> bits;       // broadcast bits, per player
    std::vector<u64> field_ops;  // GF(q) operations, per player
    std::map<TripleKey, u64> triples;
    u64 provenance_field_triples = 0;  // consumed triples re-expressed in field triples
    u64 retries = 0;                   // extra Las Vegas candidates burned

    CostMeter() = default;
    explicit CostMeter(int n) : bits(n, 0), field_ops(n, 0) {}

    u64 bits_per_player() const { return bits.empty() ? 0 : *std::max_element(bits.begin(), bits.end()); }
    u64 field_ops_per_player() const {
        return field_ops.empty() ? 0 : *std::max_element(field_ops.begin(), field_ops.end());
    }

    u64 triples_of(TripleKind k) const {
        u64 t = 0;
        for (const auto& [key, c] : triples)
            if (key.kind == k) t += c;
        return t;
    }

    // Everything except rounds adds up under parallel composition.
    void absorb_costs(const CostMeter& o) {
        for (std::size_t i = 0; i < bits.size() && i < o.bits.size(); ++i) bits[i] += o.bits[i];
        for (std::size_t i = 0; i < field_ops.size() && i < o.field_ops.size(); ++i)
            field_ops[i] += o.field_ops[i];
        for (const auto& [k, c] : o.triples) triples[k] += c;
        provenance_field_triples += o.provenance_field_triples;
        retries += o.retries;
    }
};

// One masked value revealed by a multiplication (the d or e of the Beaver
// step).  Collected only when a test installs a log on the context; the
// uniformity harness feeds on these.
struct MaskedRevealRecord {
    u64 value;
    std::string tag;
};

template <class Elem>
struct BeaverTriple {
    Shared<Elem> x, y, z;  // x = y * z after reconstruction
};

namespace detail {

template <class R>
std::size_t product_words(const R& r) {
    if constexpr (requires { r.product_words(); })
        return r.product_words();
    else
        return r.words();
}

template <class R>
void flatten_product(const R& r, const typename R::Elem& e, std::vector<u64>& out) {
    if constexpr (requires { r.flatten_product(e, out); })
        r.flatten_product(e, out);
    else
        r.flatten(e, out);
}

template <class R>
typename R::Elem unflatten_product(const R& r, const u64* w) {
    if constexpr (requires { r.unflatten_product(w); })
        return r.unflatten_product(w);
    else
        return r.unflatten(w);
}

}  // namespace detail

// Preprocessed triples by kind.  Stored flat (per player: x|y|z words) so one
// container serves every ring; each triple is consumed at most once.
class TripleStore {
  public:
    using RawTriple = std::vector<u64>;  // players x (x|y|z words), flat

    template <class R>
    void put(const R& ring, const BeaverTriple<typename R::Elem>& t) {
        std::size_t record = detail::product_words(ring) + 2 * ring.words();
        RawTriple raw;
        raw.reserve(record * t.x.v.size());
        for (std::size_t i = 0; i < t.x.v.size(); ++i) {
            detail::flatten_product(ring, t.x.v[i], raw);
            ring.flatten(t.y.v[i], raw);
            ring.flatten(t.z.v[i], raw);
        }
        put_raw(ring.key(), std::move(raw));
        ++produced_[ring.key()];
    }

    template <class R>
    BeaverTriple<typename R::Elem> take(const R& ring, CostMeter& meter) {
        auto it = queues_.find(ring.key());
        if (it == queues_.end() || it->second.empty())
            throw preprocessing_exhausted("preprocessing exhausted: no " + key_name(ring.key()) +
                                          " triples left");
        RawTriple raw = std::move(it->second.front());
        it->second.pop_front();
        ++consumed_[ring.key()];
        ++meter.triples[ring.key()];
        meter.provenance_field_triples += field_triple_provenance(ring.key());

        BeaverTriple<typename R::Elem> t;
        std::size_t pw = detail::product_words(ring), w = ring.words();
        std::size_t record = pw + 2 * w;
        if (raw.empty() || raw.size() % record != 0)
            throw protocol_bug("triple store: corrupt record");
        std::size_t players = raw.size() / record;
        t.x.v.reserve(players);
        t.y.v.reserve(players);
        t.z.v.reserve(players);
        for (std::size_t p = 0; p < players; ++p) {
            const u64* base = raw.data() + p * record;
            t.x.v.push_back(detail::unflatten_product(ring, base));
            t.y.v.push_back(ring.unflatten(base + pw));
            t.z.v.push_back(ring.unflatten(base + pw + w));
        }
        return t;
    }

    void put_raw(const TripleKey& key, RawTriple raw) { queues_[key].push_back(std::move(raw)); }

    u64 available(const TripleKey& key) const {
        auto it = queues_.find(key);
        return it == queues_.end() ? 0 : it->second.size();
    }

    u64 consumed(const TripleKey& key) const {
        auto it = consumed_.find(key);
        return it == consumed_.end() ? 0 : it->second;
    }

    std::vector<TripleKey> kinds() const {
        std::vector<TripleKey> out;
        for (const auto& [k, q] : queues_)
            if (!q.empty()) out.push_back(k);
        return out;
    }

    const std::deque<RawTriple>& raw_queue(const TripleKey& key) const {
        static const std::deque<RawTriple> empty;
        auto it = queues_.find(key);
        return it == queues_.end() ? empty : it->second;
    }

  private:
    std::map<TripleKey, std::deque<RawTriple>> queues_;
    std::map<TripleKey, u64> produced_, consumed_;
};

// Shared mutable state of one simulation: player set, seeded randomness,
// broadcast transcript, preprocessing store.
struct EngineState {
    PrimeField field;
    int n_players;
    u64 master_seed;
    std::vector<Rng> player_rng;
    Rng public_rng;
    Dealer dealer;
    TripleStore store;
    std::vector<TranscriptEvent> transcript;

    EngineState(int n, PrimeField f, u64 seed)
        : field(f),
          n_players(n),
          master_seed(seed),
          public_rng(make_stream(seed, 0x7075626cULL)),
          dealer(seed, f) {
        if (n < 2) throw domain_error("EngineState: need at least 2 players");
        for (int i = 0; i < n; ++i) player_rng.push_back(make_stream(seed, 1 + u64(i)));
    }
};

struct BroadcastPayload {
    int sender;  // 1-based
    u64 bits;
    std::string tag;
};

// Execution context of one (sub-)protocol instance: shared engine state plus
// this instance's own meter.  Parallel composition forks the meter only.
class Ctx {
  public:
    EngineState* st;
    CostMeter meter;
    u64 round_base = 0;
    std::vector<MaskedRevealRecord>* reveal_log = nullptr;

    explicit Ctx(EngineState& s) : st(&s), meter(s.n_players) {}

    int players() const { return st->n_players; }
    const PrimeField& field() const { return st->field; }
    Rng& prng(int player) { return st->player_rng[player]; }  // 0-based
    Rng& public_coin() { return st->public_rng; }
    TripleStore& store() { return st->store; }

    // Local compute phase of one player; field operations done inside are
    // attributed to that player (0-based).
    template <class F>
    decltype(auto) local(int player, F&& fn) {
        u64* prev = detail::op_counter;
        detail::op_counter = &meter.field_ops[player];
        struct Reset {
            u64* prev;
            ~Reset() { detail::op_counter = prev; }
        } reset{prev};
        return fn();
    }

    // One communication step: every player submits exactly once, all
    // payloads are delivered before any further compute.
    void broadcast_round(const std::vector<BroadcastPayload>& payloads) {
        if (payloads.empty()) throw protocol_bug("broadcast_round: empty round");
        std::vector<bool> seen(players(), false);
        for (const auto& p : payloads) {
            if (p.sender < 1 || p.sender > players())
                throw protocol_bug("broadcast_round: bad sender");
            if (seen[p.sender - 1]) throw protocol_bug("broadcast_round: double submission");
            seen[p.sender - 1] = true;
        }
        for (bool b : seen)
            if (!b) throw protocol_bug("broadcast_round: absent player");
        meter.rounds += 1;
        u64 abs_round = round_base + meter.rounds;
        for (const auto& p : payloads) {
            meter.bits[p.sender - 1] += p.bits;
            st->transcript.push_back({abs_round, p.sender, p.tag, p.bits});
        }
    }

    // Symmetric round: all players broadcast the same payload size.
    void symmetric_round(u64 bits_each, const std::string& tag) {
        std::vector<BroadcastPayload> p;
        p.reserve(players());
        for (int i = 1; i <= players(); ++i) p.push_back({i, bits_each, tag});
        broadcast_round(p);
    }

    Shared<u64> rand_field_share() { return rand_share(FieldRing{field()}, st->player_rng); }
};

// A public computation every player performs identically (reconstruction of
// a revealed value, a public determinant...): run it once, charge the same
// operation count to every player.
template <class F>
decltype(auto) local_all(Ctx& ctx, F&& fn) {
    u64 before = ctx.meter.field_ops[0];
    if constexpr (std::is_void_v<decltype(ctx.local(0, fn))>) {
        ctx.local(0, fn);
        u64 delta = ctx.meter.field_ops[0] - before;
        for (int i = 1; i < ctx.players(); ++i) ctx.meter.field_ops[i] += delta;
    } else {
        decltype(auto) r = ctx.local(0, fn);
        u64 delta = ctx.meter.field_ops[0] - before;
        for (int i = 1; i < ctx.players(); ++i) ctx.meter.field_ops[i] += delta;
        return r;
    }
}

// Parallel composition of independent sub-protocols: rounds merge (max),
// every other cost adds.
inline void par_compose(Ctx& ctx, const std::vector<std::function<void(Ctx&)>>& subs) {
    u64 max_rounds = 0;
    for (const auto& sub : subs) {
        Ctx child(*ctx.st);
        child.round_base = ctx.round_base + ctx.meter.rounds;
        child.reveal_log = ctx.reveal_log;
        sub(child);
        max_rounds = std::max(max_rounds, child.meter.rounds);
        ctx.meter.absorb_costs(child.meter);
    }
    ctx.meter.rounds += max_rounds;
}

// Owns the engine state; run() executes a protocol closure deterministically
// and returns its cost meter.  The transcript of the last run stays in
// state().transcript.
class Simulation {
  public:
    Simulation(int n_players, u64 q, u64 seed) : st_(n_players, PrimeField(q), seed) {}

    EngineState& state() { return st_; }
    TripleStore& store() { return st_.store; }

    template <class F>
    CostMeter run(F&& protocol) {
        st_.transcript.clear();
        Ctx ctx(st_);
        protocol(ctx);
        return ctx.meter;
    }

  private:
    EngineState st_;
};

}  // namespace polydet

#endif
