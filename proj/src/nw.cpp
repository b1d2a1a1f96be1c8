#include "pv/nw.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace pv {

bool SetDesign::valid() const {
    if (int(sets.size()) != L) return false;
    for (auto& s : sets) {
        if (int(s.size()) != n_block) return false;
        if (!std::is_sorted(s.begin(), s.end())) return false;
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
        if (s.front() < 0 || s.back() >= m) return false;
    }
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            std::vector<int> inter;
            std::set_intersection(sets[i].begin(), sets[i].end(), sets[j].begin(), sets[j].end(),
                                  std::back_inserter(inter));
            if (int(inter.size()) > d) return false;
        }
    return true;
}

SetDesign build_design(int n_block, int L, int d) {
    if (n_block < 1 || L < 1 || d < 0) throw std::invalid_argument("build_design: bad parameters");
    SetDesign out;
    out.L = L;
    out.n_block = n_block;
    out.d = d;
    if (d == 0 || L == 1) { // disjoint blocks
        out.m = n_block * L;
        out.sets.resize(L);
        for (int i = 0; i < L; ++i) {
            out.sets[i].resize(n_block);
            std::iota(out.sets[i].begin(), out.sets[i].end(), i * n_block);
        }
        return out;
    }

    // greedy over a growing universe, restarting from scratch on failure;
    // deterministic because the RNG is keyed by the parameters alone
    for (int m = 2 * n_block;; m = m + (m + 3) / 4) {
        if (m > 1 << 20) throw std::runtime_error("build_design: no design found");
        Rng rng(0x6e77ULL ^ (std::uint64_t(n_block) << 40) ^ (std::uint64_t(L) << 20) ^
                std::uint64_t(d) ^ (std::uint64_t(m) << 50));
        std::vector<std::vector<int>> sets;
        std::vector<int> universe(m);
        std::iota(universe.begin(), universe.end(), 0);
        bool ok = true;
        for (int i = 0; i < L && ok; ++i) {
            bool placed = false;
            for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
                for (int j = 0; j < n_block; ++j) // partial Fisher-Yates
                    std::swap(universe[j], universe[j + rng.index(std::uint64_t(m - j))]);
                std::vector<int> cand(universe.begin(), universe.begin() + n_block);
                std::sort(cand.begin(), cand.end());
                bool fits = true;
                for (auto& prev : sets) {
                    std::vector<int> inter;
                    std::set_intersection(prev.begin(), prev.end(), cand.begin(), cand.end(),
                                          std::back_inserter(inter));
                    if (int(inter.size()) > d) {
                        fits = false;
                        break;
                    }
                }
                if (fits) {
                    sets.push_back(std::move(cand));
                    placed = true;
                }
            }
            ok = placed;
        }
        if (ok) {
            out.m = m;
            out.sets = std::move(sets);
            return out;
        }
    }
}

std::string design_to_json(const SetDesign& design) {
    nlohmann::json j;
    j["m"] = design.m;
    j["L"] = design.L;
    j["n_block"] = design.n_block;
    j["d"] = design.d;
    j["sets"] = design.sets;
    return j.dump();
}

int AmpFunction::eval_bit(MembershipOracle& oracle, const std::vector<std::uint8_t>& input) const {
    int n = base->n;
    if (int(input.size()) != arity()) throw std::invalid_argument("amp eval: length mismatch");
    int acc = 0;
    for (int i = 0; i < k; ++i) {
        std::uint32_t x = 0;
        for (int j = 0; j < n; ++j) x |= std::uint32_t(input[i * n + j] & 1) << j;
        int fx = oracle.sign(x) < 0 ? 1 : 0; // one base query per block, even when y_i = 0
        acc ^= fx & (input[n * k + i] & 1);
    }
    return acc;
}

TruthTable AmpFunction::full_table(MembershipOracle& oracle) const {
    int a = arity();
    if (a > kMaxArity) throw std::invalid_argument("amp table: arity too large");
    TruthTable t;
    t.n = a;
    t.values.resize(std::size_t(1) << a);
    std::vector<std::uint8_t> input(a);
    for (std::uint32_t x = 0; x < t.size(); ++x) {
        for (int j = 0; j < a; ++j) input[j] = (x >> j) & 1;
        t.values[x] = eval_bit(oracle, input) ? -1 : 1;
    }
    return t;
}

std::vector<std::uint8_t> nw_generate(const std::function<int(std::uint32_t)>& g_bit,
                                      const SetDesign& design, const std::vector<std::uint8_t>& z) {
    if (int(z.size()) != design.m) throw std::invalid_argument("nw_generate: |z| != m");
    std::vector<std::uint8_t> out(design.L);
    for (int i = 0; i < design.L; ++i) {
        std::uint32_t x = 0;
        for (int j = 0; j < design.n_block; ++j)
            x |= std::uint32_t(z[design.sets[i][j]] & 1) << j;
        out[i] = std::uint8_t(g_bit(x) & 1);
    }
    return out;
}

WeakLearnerResult reconstruct_weak_learner(MembershipOracle& g_oracle, const Distinguisher& dist,
                                           const SetDesign& design, Rng rng, int reps) {
    int L = design.L, nb = design.n_block, m = design.m;
    if (reps <= 0) reps = 16 * L * L;

    // position-of-index lookup within S_i, rebuilt per repetition
    std::vector<int> in_target(m);

    auto agreement = [&](const TruthTable& h) {
        if (nb <= 10) {
            std::uint32_t size = std::uint32_t(1) << nb;
            std::uint32_t agree = 0;
            for (std::uint32_t x = 0; x < size; ++x)
                agree += h.bit(x) == (g_oracle.sign(x) < 0 ? 1 : 0);
            return double(agree) / double(size);
        }
        std::uint64_t samples = q_cb(1.0 / (8.0 * L), 1.0 / (4.0 * double(reps)));
        std::uint64_t agree = 0;
        for (std::uint64_t s = 0; s < samples; ++s) {
            std::uint32_t x = std::uint32_t(rng.bits(nb));
            agree += h.bit(x) == (g_oracle.sign(x) < 0 ? 1 : 0);
        }
        return double(agree) / double(samples);
    };

    WeakLearnerResult res;
    res.hypothesis = constant_fn(nb, +1);
    res.measured_agreement = agreement(res.hypothesis);
    res.candidates = 1;
    auto consider = [&](TruthTable h) {
        double a = agreement(h);
        ++res.candidates;
        if (a > res.measured_agreement) {
            res.measured_agreement = a;
            res.hypothesis = std::move(h);
        }
    };
    consider(constant_fn(nb, -1));

    std::vector<std::uint8_t> z(m), out(L);
    for (int rep = 0; rep < reps; ++rep) {
        Rng rep_rng = rng.child(std::uint64_t(rep));
        int i = int(rep_rng.index(std::uint64_t(L)));
        for (auto& b : z) b = std::uint8_t(rep_rng.bits(1));
        std::vector<std::uint8_t> y(L);
        for (int j = i; j < L; ++j) y[j] = std::uint8_t(rep_rng.bits(1));

        std::fill(in_target.begin(), in_target.end(), -1);
        for (int j = 0; j < nb; ++j) in_target[design.sets[i][j]] = j;

        TruthTable cand;
        cand.n = nb;
        cand.values.resize(std::size_t(1) << nb);
        for (std::uint32_t x = 0; x < cand.size(); ++x) {
            for (int j = 0; j < i; ++j) {
                std::uint32_t q = 0;
                for (int t = 0; t < nb; ++t) {
                    int pos = design.sets[j][t];
                    int bit = in_target[pos] >= 0 ? int((x >> in_target[pos]) & 1) : z[pos];
                    q |= std::uint32_t(bit) << t;
                }
                out[j] = std::uint8_t(g_oracle.sign(q) < 0 ? 1 : 0);
            }
            for (int j = i; j < L; ++j) out[j] = y[j];
            int guess = dist(out) ? y[i] : 1 - y[i];
            cand.values[x] = guess ? -1 : 1;
        }
        consider(std::move(cand));
    }
    return res;
}

AmpDesignView::AmpDesignView(const SetDesign& d, int n_, int k_) : design(&d), n(n_), k(k_) {
    if (d.n_block != n * k + k)
        throw std::invalid_argument("AmpDesignView: block size must be n*k+k");
}

std::vector<int> AmpDesignView::chunk(int i, int v) const {
    auto& s = design->sets[i];
    return {s.begin() + std::size_t(v) * n, s.begin() + std::size_t(v + 1) * n};
}

std::vector<int> AmpDesignView::suffix(int i) const {
    auto& s = design->sets[i];
    return {s.end() - k, s.end()};
}

int AmpDesignView::overlap(int u, int v, int i) const {
    auto c = chunk(u, v);
    auto& s = design->sets[i];
    int cnt = 0;
    for (int e : c) cnt += std::binary_search(s.begin(), s.end(), e);
    return cnt;
}

std::uint64_t AmpDesignView::query_total(int i) const {
    std::uint64_t q = 0;
    for (int u = 0; u < i; ++u)
        for (int v = 0; v < k; ++v) q += std::uint64_t(1) << overlap(u, v, i);
    return q;
}

namespace {

// completions of the positions fixed by z, free coordinates (those inside
// S_i) enumerated lexicographically: earlier positions are more significant
template <typename Emit>
void enumerate_subcube(const std::vector<int>& positions, const std::vector<std::int8_t>& z,
                       const std::vector<int>& free_mark, Emit&& emit) {
    std::vector<int> free_at; // indices into `positions` that are free
    for (std::size_t j = 0; j < positions.size(); ++j)
        if (free_mark[positions[j]]) free_at.push_back(int(j));
    int b = int(free_at.size());
    std::vector<std::uint8_t> bits(positions.size());
    for (std::size_t j = 0; j < positions.size(); ++j)
        if (!free_mark[positions[j]]) bits[j] = std::uint8_t(z[positions[j]] & 1);
    for (std::uint64_t c = 0; c < (std::uint64_t(1) << b); ++c) {
        for (int j = 0; j < b; ++j)
            bits[free_at[j]] = std::uint8_t((c >> (b - 1 - j)) & 1);
        emit(bits);
    }
}

NwQueryBundle assemble_bundle(const AmpDesignView& view, int i,
                              const std::vector<std::int8_t>& z,
                              const std::vector<int>& in_target) {
    NwQueryBundle bundle;
    bundle.i = i;
    bundle.z = z;
    for (int u = 0; u < i; ++u) {
        for (int v = 0; v < view.k; ++v) {
            auto positions = view.chunk(u, v);
            enumerate_subcube(positions, z, in_target, [&](const std::vector<std::uint8_t>& bits) {
                std::uint32_t q = 0;
                for (std::size_t j = 0; j < bits.size(); ++j)
                    q |= std::uint32_t(bits[j]) << j;
                bundle.f_queries.push_back(q);
            });
        }
        enumerate_subcube(view.design->sets[u], z, in_target,
                          [&](const std::vector<std::uint8_t>& bits) {
                              bundle.amp_queries.push_back(bits);
                          });
    }
    return bundle;
}

} // namespace

NwQueryBundle nw_queries(const AmpDesignView& view, int i, Rng& rng) {
    int m = view.design->m;
    std::vector<int> in_target(m, 0);
    for (int e : view.design->sets[i]) in_target[e] = 1;
    std::vector<std::int8_t> z(m, -1);
    for (int j = 0; j < m; ++j)
        if (!in_target[j]) z[j] = std::int8_t(rng.bits(1));
    return assemble_bundle(view, i, z, in_target);
}

NwQueryBundle embedded_nw_queries(std::uint32_t w, const AmpDesignView& view, Rng& rng,
                                  std::optional<int> force_i) {
    int L = view.design->L, m = view.design->m;
    // position 0 generates no queries, so it cannot host an embedding
    int i = force_i ? *force_i : 1 + int(rng.index(std::uint64_t(L - 1)));
    if (i < 1 || i >= L) throw std::invalid_argument("embedded_nw_queries: bad position");

    std::uint64_t total = view.query_total(i);
    std::uint64_t pick = rng.index(total);
    int cu = -1, cv = -1;
    std::uint64_t offset = 0;
    for (int u = 0; u < i && cu < 0; ++u)
        for (int v = 0; v < view.k; ++v) {
            std::uint64_t width = std::uint64_t(1) << view.overlap(u, v, i);
            if (pick < offset + width) {
                cu = u;
                cv = v;
                break;
            }
            offset += width;
        }

    std::vector<int> in_target(m, 0);
    for (int e : view.design->sets[i]) in_target[e] = 1;
    std::vector<std::int8_t> z(m, -1);
    for (int j = 0; j < m; ++j)
        if (!in_target[j]) z[j] = std::int8_t(rng.bits(1));

    // plant w's bits on the chosen chunk outside S_i; its bits inside S_i pick
    // the lexicographic rank of the embedded query within that subcube
    auto positions = view.chunk(cu, cv);
    std::uint64_t rank = 0;
    int b = 0;
    for (std::size_t j = 0; j < positions.size(); ++j) {
        int bit = int((w >> j) & 1);
        if (in_target[positions[j]])
            rank = (rank << 1) | std::uint64_t(bit), ++b;
        else
            z[positions[j]] = std::int8_t(bit);
    }

    NwQueryBundle bundle = assemble_bundle(view, i, z, in_target);
    bundle.chosen_u = cu;
    bundle.chosen_v = cv;
    bundle.embedded_index = std::size_t(offset + rank);
    return bundle;
}

MarginalReport marginal_test(const AmpDesignView& view, int i, std::size_t p,
                             std::uint64_t trials, Rng rng) {
    // identify the subcube holding query p and its fixed lexicographic rank
    int pu = -1, pv = -1;
    std::uint64_t offset = 0;
    for (int u = 0; u < i && pu < 0; ++u)
        for (int v = 0; v < view.k; ++v) {
            std::uint64_t width = std::uint64_t(1) << view.overlap(u, v, i);
            if (p < offset + width) {
                pu = u;
                pv = v;
                break;
            }
            offset += width;
        }
    if (pu < 0) throw std::invalid_argument("marginal_test: query index out of range");
    std::uint64_t rank = p - offset;

    std::vector<int> in_target(view.design->m, 0);
    for (int e : view.design->sets[i]) in_target[e] = 1;
    auto positions = view.chunk(pu, pv);
    int b = view.overlap(pu, pv, i);
    if (view.n - b > 20) throw std::invalid_argument("marginal_test: too many bins");

    // the predicted marginal fixes the free (overlap) coordinates to the rank
    // pattern and is uniform over the remaining ones
    std::uint32_t alpha = 0, free_mask = 0;
    {
        int seen = 0;
        for (std::size_t j = 0; j < positions.size(); ++j)
            if (in_target[positions[j]]) {
                free_mask |= std::uint32_t(1) << j;
                alpha |= std::uint32_t((rank >> (b - 1 - seen)) & 1) << j;
                ++seen;
            }
    }

    MarginalReport report;
    report.overlap = b;
    report.trials = trials;
    report.zero_case_ok = true;
    std::vector<std::uint64_t> counts(std::size_t(1) << (view.n - b), 0);
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        Rng t = rng.child(trial);
        NwQueryBundle bundle = nw_queries(view, i, t);
        std::uint32_t q = bundle.f_queries[p];
        if ((q & free_mask) != alpha) {
            report.zero_case_ok = false;
            continue;
        }
        std::uint32_t bin = 0;
        int out = 0;
        for (int j = 0; j < view.n; ++j)
            if (!((free_mask >> j) & 1)) bin |= ((q >> j) & 1u) << out++;
        ++counts[bin];
    }
    report.chi = chi_square_uniform(counts);
    return report;
}

} // namespace pv
