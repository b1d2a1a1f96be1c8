#include "pv/f2.hpp"

#include <stdexcept>

#include <json.hpp>

#include "pv/boolfn.hpp"

namespace pv {

int f2_rank(std::vector<std::uint32_t> rows) {
    int rank = 0;
    for (int col = 31; col >= 0; --col) {
        std::uint32_t bit = std::uint32_t(1) << col;
        std::size_t pivot = rank;
        while (pivot < rows.size() && !(rows[pivot] & bit)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != std::size_t(rank) && (rows[i] & bit)) rows[i] ^= rows[rank];
        ++rank;
    }
    return rank;
}

SubspaceBasis sample_basis(int n, int s, Rng& rng) {
    if (s > n) throw std::invalid_argument("sample_basis: s > n");
    for (int attempt = 0; attempt < 64; ++attempt) {
        SubspaceBasis b;
        b.n = n;
        b.vectors.resize(s);
        for (auto& v : b.vectors) v = std::uint32_t(rng.bits(n));
        if (f2_rank(b.vectors) == s) return b;
    }
    throw std::runtime_error("sample_basis: exhausted 64 resampling attempts");
}

std::uint32_t coset_of(std::uint32_t gamma, const SubspaceBasis& basis) {
    std::uint32_t a = 0;
    for (int i = 0; i < basis.s(); ++i)
        a |= std::uint32_t(parity(gamma & basis.vectors[i])) << i;
    return a;
}

std::uint32_t coset_representative(const SubspaceBasis& basis, std::uint32_t a) {
    // solve R h = a by elimination with leftmost-first pivots; free variables 0
    int s = basis.s();
    std::vector<std::uint32_t> rows(basis.vectors);
    std::vector<int> rhs(s);
    for (int i = 0; i < s; ++i) rhs[i] = int((a >> i) & 1);

    std::vector<int> pivot_col(s, -1);
    int rank = 0;
    for (int col = 0; col < basis.n && rank < s; ++col) {
        std::uint32_t bit = std::uint32_t(1) << col;
        int pivot = rank;
        while (pivot < s && !(rows[pivot] & bit)) ++pivot;
        if (pivot == s) continue;
        std::swap(rows[rank], rows[pivot]);
        std::swap(rhs[rank], rhs[pivot]);
        for (int i = 0; i < s; ++i)
            if (i != rank && (rows[i] & bit)) {
                rows[i] ^= rows[rank];
                rhs[i] ^= rhs[rank];
            }
        pivot_col[rank] = col;
        ++rank;
    }
    std::uint32_t h = 0;
    for (int i = 0; i < rank; ++i)
        if (rhs[i]) h |= std::uint32_t(1) << pivot_col[i];
    return h;
}

std::uint32_t sample_orthogonal(const SubspaceBasis& basis, Rng& rng) {
    std::uint64_t t = rng.bits(basis.s());
    std::uint32_t w = 0;
    for (int i = 0; i < basis.s(); ++i)
        if ((t >> i) & 1) w ^= basis.vectors[i];
    return w;
}

std::vector<std::uint32_t> span_table(const SubspaceBasis& basis) {
    std::vector<std::uint32_t> span(std::size_t(1) << basis.s(), 0);
    for (std::size_t t = 1; t < span.size(); ++t) {
        int low = __builtin_ctzll(t);
        span[t] = span[t & (t - 1)] ^ basis.vectors[low];
    }
    return span;
}

static std::uint32_t apply_columns(const std::vector<std::uint32_t>& cols, std::uint32_t coeffs) {
    std::uint32_t acc = 0;
    for (std::size_t i = 0; i < cols.size(); ++i)
        if ((coeffs >> i) & 1) acc ^= cols[i];
    return acc;
}

static QuerySet linear_points(const LinearPattern& p, const std::vector<std::uint32_t>& a_cols) {
    QuerySet qs;
    qs.n = p.n;
    qs.tag = PatternTag::Linear;
    qs.points.reserve(p.terms.size());
    for (auto& t : p.terms)
        qs.points.push_back(apply_columns(a_cols, t.alpha) ^ apply_columns(p.B, t.beta));
    return qs;
}

QuerySet sample_linear(const LinearPattern& pattern, Rng& rng) {
    std::vector<std::uint32_t> a_cols(pattern.k);
    for (auto& c : a_cols) c = std::uint32_t(rng.bits(pattern.n));
    return linear_points(pattern, a_cols);
}

QuerySet embed_linear(std::uint32_t w, const LinearPattern& pattern, Rng& rng) {
    for (auto& t : pattern.terms)
        if (t.alpha == 0) throw std::invalid_argument("embed_linear: alpha must be nonzero");
    std::size_t j = rng.index(pattern.terms.size());
    std::uint32_t alpha = pattern.terms[j].alpha;
    int ell = __builtin_ctz(alpha);

    std::vector<std::uint32_t> a_cols(pattern.k);
    for (int i = 0; i < pattern.k; ++i)
        if (i != ell) a_cols[i] = std::uint32_t(rng.bits(pattern.n));
    std::uint32_t acc = w ^ apply_columns(pattern.B, pattern.terms[j].beta);
    for (int i = 0; i < pattern.k; ++i)
        if (i != ell && ((alpha >> i) & 1)) acc ^= a_cols[i];
    a_cols[ell] = acc;

    QuerySet qs = linear_points(pattern, a_cols);
    qs.embedded_index = int(j);
    return qs;
}

QuerySet sample_nae(int n, Rng& rng) {
    // per coordinate: a uniform triple from {0,1}^3 minus the two constant ones
    QuerySet qs;
    qs.n = n;
    qs.tag = PatternTag::NAE;
    qs.points.assign(3, 0);
    for (int i = 0; i < n; ++i) {
        static const int kTriples[6] = {0b001, 0b010, 0b011, 0b100, 0b101, 0b110};
        int t = kTriples[rng.index(6)];
        for (int slot = 0; slot < 3; ++slot)
            qs.points[slot] |= std::uint32_t((t >> slot) & 1) << i;
    }
    return qs;
}

QuerySet embed_nae(std::uint32_t w, int n, Rng& rng) {
    // w at a uniform slot; per coordinate the remaining two bits are drawn from
    // the conditional distribution given w's bit (uniform over the 3 non-constant
    // completions), so the joint matches sample_nae exactly and the embedded
    // slot stays uniform even conditioned on the output.
    QuerySet qs;
    qs.n = n;
    qs.tag = PatternTag::NAE;
    qs.points.assign(3, 0);
    int slot_w = int(rng.index(3));
    int other[2];
    other[0] = slot_w == 0 ? 1 : 0;
    other[1] = slot_w == 2 ? 1 : 2;
    qs.points[slot_w] = w;
    for (int i = 0; i < n; ++i) {
        int b = int((w >> i) & 1);
        // completions (p,q) in {0,1}^2 except (b,b)
        int choice = int(rng.index(3));
        int p, q;
        int forbidden = (b << 1) | b;
        int packed = choice >= forbidden ? choice + 1 : choice;
        p = (packed >> 1) & 1;
        q = packed & 1;
        qs.points[other[0]] |= std::uint32_t(p) << i;
        qs.points[other[1]] |= std::uint32_t(q) << i;
    }
    qs.embedded_index = slot_w;
    return qs;
}

QuerySet sample_plain(int n, int count, Rng& rng) {
    QuerySet qs;
    qs.n = n;
    qs.tag = PatternTag::Plain;
    qs.points.resize(count);
    for (auto& p : qs.points) p = std::uint32_t(rng.bits(n));
    return qs;
}

QuerySet embed_plain(std::uint32_t w, int n, int count, Rng& rng) {
    QuerySet qs = sample_plain(n, count, rng);
    int j = int(rng.index(count));
    qs.points[j] = w;
    qs.embedded_index = j;
    return qs;
}

Generator linear_generator(const LinearPattern& pattern) {
    Generator g;
    g.query_count = int(pattern.terms.size());
    g.ctx = &pattern;
    g.sample = [](const void* ctx, Rng& rng) {
        return sample_linear(*static_cast<const LinearPattern*>(ctx), rng);
    };
    g.embed = [](const void* ctx, std::uint32_t w, Rng& rng) {
        return embed_linear(w, *static_cast<const LinearPattern*>(ctx), rng);
    };
    return g;
}

Generator nae_generator(const int& n) {
    Generator g;
    g.query_count = 3;
    g.ctx = &n;
    g.sample = [](const void* ctx, Rng& rng) {
        return sample_nae(*static_cast<const int*>(ctx), rng);
    };
    g.embed = [](const void* ctx, std::uint32_t w, Rng& rng) {
        return embed_nae(w, *static_cast<const int*>(ctx), rng);
    };
    return g;
}

Generator plain_generator(const std::pair<int, int>& n_and_count) {
    Generator g;
    g.query_count = n_and_count.second;
    g.ctx = &n_and_count;
    g.sample = [](const void* ctx, Rng& rng) {
        auto& [n, c] = *static_cast<const std::pair<int, int>*>(ctx);
        return sample_plain(n, c, rng);
    };
    g.embed = [](const void* ctx, std::uint32_t w, Rng& rng) {
        auto& [n, c] = *static_cast<const std::pair<int, int>*>(ctx);
        return embed_plain(w, n, c, rng);
    };
    return g;
}

QuerySet sample_union(const std::vector<Generator>& gens, Rng& rng) {
    if (gens.empty()) throw std::invalid_argument("sample_union: empty generator list");
    QuerySet out;
    out.tag = PatternTag::Plain;
    std::uint64_t counter = 0;
    for (auto& g : gens) {
        Rng sub = rng.child(counter++);
        QuerySet part = g.sample(g.ctx, sub);
        out.n = part.n;
        out.points.insert(out.points.end(), part.points.begin(), part.points.end());
    }
    return out;
}

QuerySet embed_union(std::uint32_t w, const std::vector<Generator>& gens, Rng& rng) {
    if (gens.empty()) throw std::invalid_argument("embed_union: empty generator list");
    std::uint64_t total = 0;
    for (auto& g : gens) total += std::uint64_t(g.query_count);
    // pick the embedding side proportionally to its query count
    std::uint64_t pick = rng.index(total);
    std::size_t chosen = 0;
    for (std::uint64_t acc = 0; chosen < gens.size(); ++chosen) {
        acc += std::uint64_t(gens[chosen].query_count);
        if (pick < acc) break;
    }
    QuerySet out;
    out.tag = PatternTag::Plain;
    std::uint64_t counter = 0;
    int offset = 0;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        Rng sub = rng.child(counter++);
        QuerySet part = i == chosen ? gens[i].embed(gens[i].ctx, w, sub)
                                    : gens[i].sample(gens[i].ctx, sub);
        out.n = part.n;
        if (i == chosen) out.embedded_index = offset + *part.embedded_index;
        offset += int(part.points.size());
        out.points.insert(out.points.end(), part.points.begin(), part.points.end());
    }
    return out;
}

std::string query_set_to_json(const QuerySet& qs, bool prover_view) {
    static const char* kTags[] = {"linear", "nae", "nw-subcubes", "plain"};
    nlohmann::json j;
    j["n"] = qs.n;
    j["pattern"] = kTags[int(qs.tag)];
    auto& pts = j["points"] = nlohmann::json::array();
    for (auto p : qs.points) pts.push_back(hex_encode_point(p, qs.n));
    if (!prover_view && qs.embedded_index) j["embedded_index"] = *qs.embedded_index;
    if (qs.labels) j["labels"] = *qs.labels;
    return j.dump();
}

} // namespace pv
