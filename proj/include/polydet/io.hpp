#ifndef POLYDET_IO_HPP
#define POLYDET_IO_HPP

#include <cstring>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "polydet/costs.hpp"

namespace polydet {

// ---------------------------------------------------------------------------
// Binary triple-store files: one kind per file, little-endian u64 words,
// FNV-1a checksum over everything before the trailer.
//
//   magic "PDTS" | version u32 | q u64 | players u32 | kind u32 | a u32 |
//   b u32 | count u64 | words u64 | modlen u64 | mod coeffs (modlen x u64) |
//   count x players x words u64 | checksum u64
// ---------------------------------------------------------------------------

namespace detail {

constexpr char kTripleMagic[4] = {'P', 'D', 'T', 'S'};
constexpr u32 kTripleVersion = 1;

struct Fnv1a {
    u64 h = 14695981039346656037ULL;
    void bytes(const void* p, std::size_t n) {
        const unsigned char* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ULL;
        }
    }
};

template <class T>
void put(std::ostream& os, Fnv1a& sum, T v) {
    unsigned char b[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), sizeof(T));
    sum.bytes(b, sizeof(T));
}

template <class T>
T get(std::istream& is, Fnv1a& sum) {
    unsigned char b[sizeof(T)];
    is.read(reinterpret_cast<char*>(b), sizeof(T));
    if (!is) throw error("triple file: truncated (checksum cannot match)");
    sum.bytes(b, sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= T(b[i]) << (8 * i);
    return v;
}

}  // namespace detail

struct TripleFileInfo {
    u64 q = 0;
    u32 players = 0;
    TripleKey key{TripleKind::field, 0, 0};
    u64 count = 0;
    u64 words = 0;
    Poly modulus;  // extension-field files carry their f
};

inline void write_triple_file(std::ostream& os, u64 q, u32 players, const TripleKey& key,
                              const std::deque<TripleStore::RawTriple>& triples,
                              const Poly& modulus = Poly{}) {
    detail::Fnv1a sum;
    os.write(detail::kTripleMagic, 4);
    sum.bytes(detail::kTripleMagic, 4);
    detail::put<u32>(os, sum, detail::kTripleVersion);
    detail::put<u64>(os, sum, q);
    detail::put<u32>(os, sum, players);
    detail::put<u32>(os, sum, static_cast<u32>(key.kind));
    detail::put<u32>(os, sum, key.a);
    detail::put<u32>(os, sum, key.b);
    detail::put<u64>(os, sum, u64(triples.size()));
    u64 words = triples.empty() ? 0 : triples.front().size() / players;
    detail::put<u64>(os, sum, words);
    detail::put<u64>(os, sum, u64(modulus.c.size()));
    for (u64 c : modulus.c) detail::put<u64>(os, sum, c);
    for (const auto& t : triples) {
        if (t.size() != u64(players) * words)
            throw error("triple file: inconsistent record size");
        for (u64 w : t) detail::put<u64>(os, sum, w);
    }
    // trailer: checksum of everything above, not itself summed
    u64 h = sum.h;
    unsigned char b[8];
    for (std::size_t i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(h >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline void save_triples(const std::string& path, const EngineState& st, const TripleKey& key,
                         const Poly& modulus = Poly{}) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw error("cannot open triple file for writing: " + path);
    write_triple_file(os, st.field.modulus(), u32(st.n_players), key, st.store.raw_queue(key),
                      modulus);
}

// Reads and checksum-verifies a triple file; when `into` is given the
// records are appended to the store.
inline TripleFileInfo load_triples(std::istream& is, TripleStore* into) {
    detail::Fnv1a sum;
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, detail::kTripleMagic, 4) != 0)
        throw error("triple file: bad magic");
    sum.bytes(magic, 4);
    u32 version = detail::get<u32>(is, sum);
    if (version != detail::kTripleVersion) throw error("triple file: unsupported version");
    TripleFileInfo info;
    info.q = detail::get<u64>(is, sum);
    info.players = detail::get<u32>(is, sum);
    u32 kind = detail::get<u32>(is, sum);
    if (kind > u32(TripleKind::extfield)) throw error("triple file: unknown kind");
    info.key.kind = static_cast<TripleKind>(kind);
    info.key.a = detail::get<u32>(is, sum);
    info.key.b = detail::get<u32>(is, sum);
    info.count = detail::get<u64>(is, sum);
    info.words = detail::get<u64>(is, sum);
    u64 modlen = detail::get<u64>(is, sum);
    std::vector<u64> mc(modlen);
    for (auto& c : mc) c = detail::get<u64>(is, sum);
    info.modulus = Poly(std::move(mc));
    std::vector<TripleStore::RawTriple> records;
    records.reserve(info.count);
    for (u64 i = 0; i < info.count; ++i) {
        TripleStore::RawTriple t(u64(info.players) * info.words);
        for (auto& w : t) w = detail::get<u64>(is, sum);
        records.push_back(std::move(t));
    }
    u64 expect = sum.h;
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw error("triple file: truncated (checksum cannot match)");
    u64 got = 0;
    for (std::size_t i = 0; i < 8; ++i) got |= u64(b[i]) << (8 * i);
    if (got != expect) throw error("triple file: checksum mismatch");
    if (into)
        for (auto& t : records) into->put_raw(info.key, std::move(t));
    return info;
}

inline TripleFileInfo load_triples(const std::string& path, TripleStore* into) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw error("cannot open triple file: " + path);
    return load_triples(is, into);
}

// ---------------------------------------------------------------------------
// JSON matrix input: {"q":..,"n":..,"d":..,"entries":[[[c0,c1,..],..],..],
// "seed":..,"N":..}.  Entries are ascending coefficient lists.
// ---------------------------------------------------------------------------

struct MatrixInput {
    u64 q = 0;
    std::size_t n = 0;
    int d = 0;
    Matrix<Poly> a;
    u64 seed = 0;
    int players = 3;
};

inline MatrixInput parse_matrix_input(const nlohmann::json& j) {
    MatrixInput in;
    if (!j.contains("q") || !j.contains("n") || !j.contains("d") || !j.contains("entries"))
        throw domain_error("input: need fields q, n, d, entries");
    in.q = j.at("q").get<u64>();
    in.n = j.at("n").get<std::size_t>();
    in.d = j.at("d").get<int>();
    if (in.n == 0) throw domain_error("input: n must be positive");
    if (in.d < 0) throw domain_error("input: d must be non-negative");
    PrimeField f(in.q);  // validates primality
    const auto& rows = j.at("entries");
    if (!rows.is_array() || rows.size() != in.n)
        throw domain_error("input: entries must be an n x n array");
    in.a = Matrix<Poly>(in.n, Poly{});
    for (std::size_t i = 0; i < in.n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != in.n)
            throw domain_error("input: entries must be an n x n array");
        for (std::size_t k = 0; k < in.n; ++k) {
            const auto& cs = rows[i][k];
            if (!cs.is_array()) throw domain_error("input: each entry is a coefficient list");
            if (cs.size() > std::size_t(in.d) + 1)
                throw domain_error("input: entry degree exceeds the bound d");
            std::vector<u64> c;
            for (const auto& v : cs) {
                u64 x = v.get<u64>();
                if (x >= in.q) throw domain_error("input: coefficient out of range [0, q)");
                c.push_back(x);
            }
            in.a.at(i, k) = Poly(std::move(c));
        }
    }
    if (j.contains("seed")) in.seed = j.at("seed").get<u64>();
    if (j.contains("N")) in.players = j.at("N").get<int>();
    if (in.players < 2) throw domain_error("input: N must be at least 2");
    return in;
}

inline MatrixInput parse_matrix_input(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw domain_error(std::string("input: invalid JSON: ") + e.what());
    }
    return parse_matrix_input(j);
}

inline nlohmann::json det_output_json(const Poly& det) {
    std::vector<u64> coeffs = det.c;
    if (coeffs.empty()) coeffs.push_back(0);
    return nlohmann::json{{"det", coeffs}};
}

}  // namespace polydet

#endif
