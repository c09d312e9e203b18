#include "finset/dedup.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "finset/errors.hpp"
#include "finset/tokenize.hpp"

namespace finset {

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s, std::uint64_t basis = 0xCBF29CE484222325ULL) {
    std::uint64_t h = basis;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t hash_u64(std::uint64_t base, std::uint64_t salt) {
    return splitmix64(base ^ splitmix64(salt));
}

// union-find with path halving
struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // root at the smaller input index so the earliest member leads its cluster
        if (a < b) parent[b] = a;
        else parent[a] = b;
    }
};

}  // namespace

void DedupConfig::validate() const {
    if (shingle_w < 1) throw ConfigError("shingle_w must be >= 1");
    if (lsh_bands * lsh_rows != num_hashes)
        throw ConfigError("lsh_bands * lsh_rows must equal num_hashes");
    if (!(jaccard_threshold > 0.0 && jaccard_threshold <= 1.0))
        throw ConfigError("jaccard_threshold must lie in (0,1]");
}

std::set<std::string> shingle(std::string_view text, std::size_t w) {
    if (w < 1) throw ConfigError("shingle width must be >= 1");
    std::vector<std::string> tokens = tokenize(text);
    for (std::string& t : tokens) t = to_lower(t);
    std::set<std::string> shingles;
    if (tokens.size() < w) return shingles;
    for (std::size_t i = 0; i + w <= tokens.size(); ++i) {
        std::string s = tokens[i];
        for (std::size_t k = 1; k < w; ++k) {
            s += ' ';
            s += tokens[i + k];
        }
        shingles.insert(std::move(s));
    }
    return shingles;
}

MinHashSignature minhash_signature(const std::set<std::string>& shingles,
                                   const DedupConfig& config, std::string doc_id) {
    config.validate();
    MinHashSignature sig;
    sig.doc_id = std::move(doc_id);
    sig.seed = config.seed;
    sig.values.assign(config.num_hashes, UINT64_MAX);
    if (shingles.empty()) {
        sig.empty_input = true;
        return sig;
    }
    // per-coordinate salts derived from the seed
    std::vector<std::uint64_t> salts(config.num_hashes);
    std::uint64_t state = config.seed;
    for (std::uint64_t& s : salts) {
        state = splitmix64(state);
        s = state;
    }
    for (const std::string& sh : shingles) {
        const std::uint64_t base = fnv1a64(sh);
        for (std::size_t i = 0; i < config.num_hashes; ++i) {
            const std::uint64_t h = hash_u64(base, salts[i]);
            if (h < sig.values[i]) sig.values[i] = h;
        }
    }
    return sig;
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
    if (a.values.size() != b.values.size() || a.seed != b.seed)
        throw DataError("estimate_jaccard: signatures built with different configs");
    if (a.values.empty()) return 0.0;
    std::size_t match = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        if (a.values[i] == b.values[i]) ++match;
    return static_cast<double>(match) / static_cast<double>(a.values.size());
}

std::vector<std::pair<std::size_t, std::size_t>> lsh_candidates(
    const std::vector<MinHashSignature>& signatures, const DedupConfig& config) {
    config.validate();
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
    for (std::size_t band = 0; band < config.lsh_bands; ++band) {
        buckets.clear();
        for (std::size_t i = 0; i < signatures.size(); ++i) {
            const MinHashSignature& sig = signatures[i];
            if (sig.empty_input) continue;  // sentinel signatures never collide
            std::uint64_t h = splitmix64(band + 1);
            for (std::size_t r = 0; r < config.lsh_rows; ++r)
                h = hash_u64(h, sig.values[band * config.lsh_rows + r]);
            buckets[h].push_back(i);
        }
        for (const auto& [_, members] : buckets) {
            for (std::size_t x = 0; x < members.size(); ++x)
                for (std::size_t y = x + 1; y < members.size(); ++y)
                    pairs.emplace(members[x], members[y]);
        }
    }
    return {pairs.begin(), pairs.end()};
}

DedupResult fuzzy_dedup(const std::vector<Document>& docs, const DedupConfig& config) {
    config.validate();
    std::vector<MinHashSignature> sigs;
    sigs.reserve(docs.size());
    for (const Document& d : docs)
        sigs.push_back(minhash_signature(shingle(d.text, config.shingle_w), config, d.id));

    DisjointSet clusters(docs.size());
    for (const auto& [a, b] : lsh_candidates(sigs, config)) {
        if (estimate_jaccard(sigs[a], sigs[b]) >= config.jaccard_threshold)
            clusters.unite(a, b);
    }

    DedupResult result;
    result.report.stage = Stage::fuzzy_dedup;
    result.report.docs_in = docs.size();
    for (std::size_t i = 0; i < docs.size(); ++i) {
        result.report.tokens_in += docs[i].tokens;
        if (clusters.find(i) == i) {
            result.survivors.push_back(docs[i]);
            result.report.tokens_out += docs[i].tokens;
        } else {
            ++result.report.removed_reasons["near_duplicate"];
        }
    }
    result.report.docs_out = result.survivors.size();
    return result;
}

std::string normalize_for_exact(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    }
    return out;
}

DedupResult exact_dedup(const std::vector<Document>& docs) {
    struct Hash128 {
        std::uint64_t hi, lo;
        bool operator==(const Hash128&) const = default;
    };
    struct Hash128Hasher {
        std::size_t operator()(const Hash128& h) const { return h.hi ^ h.lo; }
    };
    std::unordered_map<Hash128, std::size_t, Hash128Hasher> seen;

    DedupResult result;
    result.report.stage = Stage::exact_dedup;
    result.report.docs_in = docs.size();
    for (const Document& d : docs) {
        result.report.tokens_in += d.tokens;
        const std::string norm = normalize_for_exact(d.text);
        Hash128 h{fnv1a64(norm), fnv1a64(norm, 0x84222325CBF29CE4ULL)};
        if (seen.emplace(h, result.survivors.size()).second) {
            result.survivors.push_back(d);
            result.report.tokens_out += d.tokens;
        } else {
            ++result.report.removed_reasons["exact_duplicate"];
        }
    }
    result.report.docs_out = result.survivors.size();
    return result;
}

std::string dedup_config_digest(const DedupConfig& config) {
    nlohmann::ordered_json j;
    j["shingle_w"] = config.shingle_w;
    j["num_hashes"] = config.num_hashes;
    j["lsh_bands"] = config.lsh_bands;
    j["lsh_rows"] = config.lsh_rows;
    j["jaccard_threshold"] = config.jaccard_threshold;
    j["seed"] = config.seed;
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(j.dump())));
    return buf;
}

void write_signature_cache(const std::vector<MinHashSignature>& sigs,
                           const DedupConfig& config, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write signature cache: " + path);
    nlohmann::ordered_json header;
    header["format"] = "finset-sigcache-v1";
    header["config_digest"] = dedup_config_digest(config);
    out << header.dump() << '\n';
    for (const MinHashSignature& s : sigs) {
        nlohmann::ordered_json j;
        j["id"] = s.doc_id;
        j["values"] = s.values;
        j["empty"] = s.empty_input;
        out << j.dump() << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

std::vector<MinHashSignature> read_signature_cache(const DedupConfig& config,
                                                   const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read signature cache: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty signature cache: " + path);
    nlohmann::ordered_json header = nlohmann::ordered_json::parse(line);
    if (header.value("format", "") != "finset-sigcache-v1")
        throw DataError("unrecognized signature cache format: " + path);
    if (header.value("config_digest", "") != dedup_config_digest(config))
        throw DataError("signature cache was built with a different config: " + path);
    std::vector<MinHashSignature> sigs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::ordered_json j = nlohmann::ordered_json::parse(line);
        MinHashSignature s;
        s.doc_id = j.at("id").get<std::string>();
        s.values = j.at("values").get<std::vector<std::uint64_t>>();
        s.empty_input = j.at("empty").get<bool>();
        s.seed = config.seed;
        if (s.values.size() != config.num_hashes)
            throw DataError("signature length mismatch in cache: " + path);
        sigs.push_back(std::move(s));
    }
    return sigs;
}

}  // namespace finset
