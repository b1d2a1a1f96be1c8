#include "pv/boolfn.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace pv {

std::pair<std::uint32_t, int> RandomExampleOracle::draw() {
    std::uint32_t x = draw_point();
    return {x, f->values[x]};
}

std::uint32_t RandomExampleOracle::draw_point() {
    ++sample_count;
    if (weights.empty()) return std::uint32_t(rng.bits(f->n));
    std::discrete_distribution<std::uint32_t> d(weights.begin(), weights.end());
    return d(rng.engine());
}

FourierSpectrum fwht(const TruthTable& f) {
    FourierSpectrum s;
    s.n = f.n;
    s.coeffs.assign(f.values.begin(), f.values.end());
    std::size_t len = s.coeffs.size();
    for (std::size_t h = 1; h < len; h <<= 1) {
        for (std::size_t i = 0; i < len; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                double a = s.coeffs[j], b = s.coeffs[j + h];
                s.coeffs[j] = a + b;
                s.coeffs[j + h] = a - b;
            }
        }
    }
    double scale = 1.0 / double(len);
    for (double& c : s.coeffs) c *= scale;
    return s;
}

TruthTable inverse_fwht(const FourierSpectrum& s) {
    // same butterfly without the 1/2^n scale
    std::vector<double> v(s.coeffs);
    std::size_t len = v.size();
    for (std::size_t h = 1; h < len; h <<= 1)
        for (std::size_t i = 0; i < len; i += h << 1)
            for (std::size_t j = i; j < i + h; ++j) {
                double a = v[j], b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
    TruthTable f;
    f.n = s.n;
    f.values.resize(len);
    for (std::size_t i = 0; i < len; ++i) f.values[i] = v[i] < 0 ? -1 : +1;
    return f;
}

std::uint64_t q_cb(double eps, double delta) {
    if (!(eps > 0.0) || !(delta > 0.0) || eps > 1.0 || delta >= 1.0)
        throw std::invalid_argument("q_cb: eps and delta must lie in (0,1)");
    return std::uint64_t(std::ceil(3.0 / (eps * eps) * std::log(2.0 / delta)));
}

double estimate_coeff(RandomExampleOracle& oracle, std::uint32_t gamma, double eps, double delta) {
    std::uint64_t reps = q_cb(eps, delta);
    std::int64_t acc = 0;
    for (std::uint64_t i = 0; i < reps; ++i) {
        auto [x, fx] = oracle.draw();
        acc += parity(x & gamma) ? -fx : fx;
    }
    return double(acc) / double(reps);
}

double dist(const TruthTable& f, const TruthTable& g) {
    if (f.n != g.n) throw std::invalid_argument("dist: arity mismatch");
    std::uint32_t bad = 0;
    for (std::uint32_t x = 0; x < f.size(); ++x) bad += f.values[x] != g.values[x];
    return double(bad) / double(f.size());
}

std::pair<double, std::size_t> opt_dist(const TruthTable& f, const std::vector<TruthTable>& cls) {
    if (cls.empty()) throw std::invalid_argument("opt_dist: empty class");
    double best = 2.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < cls.size(); ++i) {
        double d = dist(f, cls[i]);
        if (d < best) { // strict: ties keep the earliest member
            best = d;
            arg = i;
        }
    }
    return {best, arg};
}

TruthTable constant_fn(int n, int sign) {
    TruthTable f;
    f.n = n;
    f.values.assign(std::size_t(1) << n, std::int8_t(sign < 0 ? -1 : +1));
    return f;
}

TruthTable character_fn(int n, std::uint32_t gamma) {
    TruthTable f;
    f.n = n;
    f.values.resize(std::size_t(1) << n);
    for (std::uint32_t x = 0; x < f.size(); ++x) f.values[x] = parity(x & gamma) ? -1 : +1;
    return f;
}

TruthTable majority_fn(int n) {
    if (n % 2 == 0) throw std::invalid_argument("majority_fn: n must be odd");
    TruthTable f;
    f.n = n;
    f.values.resize(std::size_t(1) << n);
    for (std::uint32_t x = 0; x < f.size(); ++x)
        f.values[x] = __builtin_popcount(x) * 2 > n ? -1 : +1;
    return f;
}

TruthTable parity_fn(int n) { return character_fn(n, (std::uint32_t(1) << n) - 1); }

TruthTable junta_fn(int n, const std::vector<int>& vars, const std::vector<std::int8_t>& table) {
    if (table.size() != (std::size_t(1) << vars.size()))
        throw std::invalid_argument("junta_fn: table size mismatch");
    TruthTable f;
    f.n = n;
    f.values.resize(std::size_t(1) << n);
    for (std::uint32_t x = 0; x < f.size(); ++x) {
        std::uint32_t key = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) key |= ((x >> vars[i]) & 1u) << i;
        f.values[x] = table[key];
    }
    return f;
}

TruthTable random_fn(int n, std::uint64_t seed) {
    Rng rng(seed);
    TruthTable f;
    f.n = n;
    f.values.resize(std::size_t(1) << n);
    for (auto& v : f.values) v = rng.bits(1) ? -1 : +1;
    return f;
}

TruthTable noisy_fn(const TruthTable& base, double flip_rate, std::uint64_t seed) {
    Rng rng(seed);
    TruthTable f = base;
    for (auto& v : f.values)
        if (rng.bernoulli(flip_rate)) v = -v;
    return f;
}

TruthTable pad_fn(const TruthTable& base, int n) {
    if (n < base.n) throw std::invalid_argument("pad_fn: target arity too small");
    TruthTable f;
    f.n = n;
    f.values.resize(std::size_t(1) << n);
    std::uint32_t mask = (std::uint32_t(1) << base.n) - 1;
    for (std::uint32_t x = 0; x < f.size(); ++x) f.values[x] = base.values[x & mask];
    return f;
}

static std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        out.push_back(s.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

TruthTable make_function(int n, const std::string& spec) {
    if (n < 1 || n > kMaxArity) throw std::invalid_argument("make_function: arity out of range");
    auto parts = split(spec, ':');
    const std::string& kind = parts[0];
    if (kind == "constant") return constant_fn(n, parts.size() > 1 ? std::stoi(parts[1]) : +1);
    if (kind == "character") return character_fn(n, std::uint32_t(std::stoul(parts.at(1))));
    if (kind == "majority") return majority_fn(n);
    if (kind == "majority3pad") return pad_fn(majority_fn(3), n);
    if (kind == "parity") return parity_fn(n);
    if (kind == "random") return random_fn(n, std::stoull(parts.at(1)));
    if (kind == "bent4") {
        // inner-product bent function x1*x2 + x3*x4 padded to n
        TruthTable b;
        b.n = 4;
        b.values.resize(16);
        for (std::uint32_t x = 0; x < 16; ++x) {
            int q = ((x & 1) & ((x >> 1) & 1)) ^ (((x >> 2) & 1) & ((x >> 3) & 1));
            b.values[x] = q ? -1 : +1;
        }
        return pad_fn(b, n);
    }
    if (kind == "noisy") {
        // noisy:<base-kind>[:<base-arg>]:<rate>:<seed>
        if (parts.size() < 4) throw std::invalid_argument("make_function: malformed noisy spec");
        std::string base_spec = parts[1];
        std::size_t consumed = 2;
        if (parts[1] == "character" || parts[1] == "random") {
            base_spec += ":" + parts.at(2);
            consumed = 3;
        }
        double rate = std::stod(parts.at(consumed));
        std::uint64_t seed = std::stoull(parts.at(consumed + 1));
        return noisy_fn(make_function(n, base_spec), rate, seed);
    }
    throw std::invalid_argument("make_function: unknown spec '" + spec + "'");
}

static const char* kHexDigits = "0123456789abcdef";

std::string to_json_string(const TruthTable& f) {
    // bit i of the bitstring is 1 iff f(i) = -1; bytes packed little-endian
    std::size_t nbytes = (f.size() + 7) / 8;
    std::string hex;
    hex.reserve(nbytes * 2);
    for (std::size_t byte = 0; byte < nbytes; ++byte) {
        unsigned v = 0;
        for (unsigned bit = 0; bit < 8; ++bit) {
            std::size_t idx = byte * 8 + bit;
            if (idx < f.values.size() && f.values[idx] < 0) v |= 1u << bit;
        }
        hex.push_back(kHexDigits[v >> 4]);
        hex.push_back(kHexDigits[v & 0xf]);
    }
    nlohmann::json j{{"n", f.n}, {"bits", hex}};
    return j.dump();
}

TruthTable truth_table_from_json(const std::string& json_text) {
    auto j = nlohmann::json::parse(json_text);
    TruthTable f;
    f.n = j.at("n").get<int>();
    if (f.n < 1 || f.n > kMaxArity) throw std::invalid_argument("truth table arity out of range");
    std::string hex = j.at("bits").get<std::string>();
    f.values.assign(std::size_t(1) << f.n, +1);
    auto nibble = [&](std::size_t pos) -> unsigned {
        unsigned ch = unsigned(std::tolower(hex.at(pos)));
        return ch <= '9' ? ch - '0' : ch - 'a' + 10;
    };
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        std::size_t byte = i / 8;
        unsigned value = (nibble(byte * 2) << 4) | nibble(byte * 2 + 1);
        if ((value >> (i % 8)) & 1u) f.values[i] = -1;
    }
    return f;
}

std::string hex_encode_point(std::uint32_t x, int n) {
    int digits = (n + 3) / 4;
    std::string s(std::size_t(digits), '0');
    for (int i = 0; i < digits; ++i) s[digits - 1 - i] = kHexDigits[(x >> (4 * i)) & 0xf];
    return s;
}

std::uint32_t hex_decode_point(const std::string& hex) {
    return std::uint32_t(std::stoul(hex, nullptr, 16));
}

} // namespace pv
