#include "ace/landscape.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ace::nk {

std::string Configuration::to_string() const {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s[i] = '1';
    return s;
}

Configuration Configuration::from_string(std::string_view s) {
    Configuration c;
    c.bits.reserve(s.size());
    for (char ch : s) {
        if (ch != '0' && ch != '1')
            throw std::invalid_argument("configuration string must be 0/1, got '" +
                                        std::string(1, ch) + "'");
        c.bits.push_back(ch == '1');
    }
    return c;
}

Configuration config_from_index(std::uint64_t index, int n) {
    Configuration c;
    c.bits.resize(n);
    for (int i = 0; i < n; ++i)
        c.bits[i] = (index >> (n - 1 - i)) & 1u;
    return c;
}

std::uint64_t index_from_config(const Configuration& c) {
    std::uint64_t u = 0;
    for (int i = 0; i < c.size(); ++i)
        u = (u << 1) | c.bits[i];
    return u;
}

std::string_view to_string(InteractionPattern p) {
    switch (p) {
        case InteractionPattern::AdjacentCyclic: return "adjacent-cyclic";
        case InteractionPattern::RandomWithoutReplacement: return "random";
        case InteractionPattern::BlockDiagonal: return "block-diagonal";
    }
    throw std::logic_error("unreachable pattern");
}

InteractionPattern pattern_from_string(std::string_view s) {
    if (s == "adjacent-cyclic") return InteractionPattern::AdjacentCyclic;
    if (s == "random") return InteractionPattern::RandomWithoutReplacement;
    if (s == "block-diagonal") return InteractionPattern::BlockDiagonal;
    throw std::invalid_argument("unknown interaction pattern '" + std::string(s) +
                                "' (expected adjacent-cyclic|random|block-diagonal)");
}

namespace {

void validate_spec(const LandscapeSpec& spec) {
    if (spec.n <= 0)
        throw std::invalid_argument("landscape n must be positive, got " +
                                    std::to_string(spec.n));
    if (spec.pattern == InteractionPattern::BlockDiagonal) {
        if (spec.block_sizes.empty())
            throw std::invalid_argument("block-diagonal pattern needs block sizes");
        int sum = 0;
        for (int b : spec.block_sizes) {
            if (b <= 0)
                throw std::invalid_argument("block sizes must be positive, got " +
                                            std::to_string(b));
            sum += b;
        }
        if (sum != spec.n)
            throw std::invalid_argument(
                "block sizes sum to " + std::to_string(sum) + ", expected n = " +
                std::to_string(spec.n));
    } else {
        if (spec.k < 0 || spec.k > spec.n - 1)
            throw std::invalid_argument("k must lie in [0, n-1], got k=" +
                                        std::to_string(spec.k) + " n=" +
                                        std::to_string(spec.n));
    }
}

std::vector<std::vector<int>> build_interaction_sets(const LandscapeSpec& spec) {
    std::vector<std::vector<int>> sets(spec.n);
    switch (spec.pattern) {
        case InteractionPattern::AdjacentCyclic:
            for (int i = 0; i < spec.n; ++i)
                for (int t = 1; t <= spec.k; ++t)
                    sets[i].push_back((i + t) % spec.n);
            break;
        case InteractionPattern::RandomWithoutReplacement:
            for (int i = 0; i < spec.n; ++i) {
                std::vector<int> others;
                others.reserve(spec.n - 1);
                for (int j = 0; j < spec.n; ++j)
                    if (j != i) others.push_back(j);
                RandomStream s = substream(spec.seed, "nk.sets", i);
                for (int t = 0; t < spec.k; ++t) {
                    const auto pick =
                        t + static_cast<int>(s.next_below(others.size() - t));
                    std::swap(others[t], others[pick]);
                }
                sets[i].assign(others.begin(), others.begin() + spec.k);
                std::sort(sets[i].begin(), sets[i].end());
            }
            break;
        case InteractionPattern::BlockDiagonal: {
            int first = 0;
            for (int b : spec.block_sizes) {
                for (int i = first; i < first + b; ++i)
                    for (int j = first; j < first + b; ++j)
                        if (j != i) sets[i].push_back(j);
                first += b;
            }
            break;
        }
    }
    return sets;
}

}  // namespace

Landscape generate(const LandscapeSpec& spec) {
    validate_spec(spec);
    Landscape l;
    l.spec = spec;
    l.interaction_sets = build_interaction_sets(spec);
    l.tables.resize(spec.n);
    for (int i = 0; i < spec.n; ++i) {
        const std::size_t entries = std::size_t{1} << (1 + l.interaction_sets[i].size());
        RandomStream s = substream(spec.seed, "nk.table", i);
        l.tables[i].resize(entries);
        for (auto& v : l.tables[i]) v = s.next_unit();
    }
    return l;
}

Landscape from_parts(LandscapeSpec spec,
                     std::vector<std::vector<int>> interaction_sets,
                     std::vector<std::vector<double>> tables) {
    if (spec.n <= 0) throw std::invalid_argument("landscape n must be positive");
    if (static_cast<int>(interaction_sets.size()) != spec.n ||
        static_cast<int>(tables.size()) != spec.n)
        throw std::invalid_argument("interaction sets / tables must have n entries");
    for (int i = 0; i < spec.n; ++i) {
        for (int j : interaction_sets[i])
            if (j < 0 || j >= spec.n || j == i)
                throw std::invalid_argument("interaction partner out of range");
        const std::size_t want = std::size_t{1} << (1 + interaction_sets[i].size());
        if (tables[i].size() != want)
            throw std::invalid_argument(
                "table of attribute " + std::to_string(i) + " has " +
                std::to_string(tables[i].size()) + " entries, expected " +
                std::to_string(want));
    }
    Landscape l;
    l.spec = std::move(spec);
    l.interaction_sets = std::move(interaction_sets);
    l.tables = std::move(tables);
    return l;
}

double contribution(const Landscape& l, const Configuration& d, int attribute) {
    const auto& partners = l.interaction_sets[attribute];
    std::size_t idx = d.bits[attribute];
    for (std::size_t t = 0; t < partners.size(); ++t)
        idx |= static_cast<std::size_t>(d.bits[partners[t]]) << (t + 1);
    return l.tables[attribute][idx];
}

double fitness(const Landscape& l, const Configuration& d) {
    if (d.size() != l.n())
        throw std::invalid_argument("configuration length " +
                                    std::to_string(d.size()) +
                                    " does not match landscape n = " +
                                    std::to_string(l.n()));
    double sum = 0.0;
    for (int i = 0; i < l.n(); ++i) sum += contribution(l, d, i);
    return sum / l.n();
}

namespace {

void check_cap(int n, int cap, const char* what) {
    if (n > cap)
        throw std::invalid_argument(
            std::string(what) + " enumerates 2^n configurations; n = " +
            std::to_string(n) + " exceeds the cap of " + std::to_string(cap) +
            ". Pass a larger enumeration_cap explicitly to override.");
}

}  // namespace

OptimumResult global_optimum(const Landscape& l, int enumeration_cap) {
    check_cap(l.n(), enumeration_cap, "global_optimum");
    const std::uint64_t total = std::uint64_t{1} << l.n();
    OptimumResult best;
    best.value = -1.0;
    for (std::uint64_t u = 0; u < total; ++u) {
        Configuration c = config_from_index(u, l.n());
        const double v = fitness(l, c);
        if (v > best.value) {
            best.value = v;
            best.config = std::move(c);
        }
    }
    return best;
}

CensusResult local_optima_census(const Landscape& l, int enumeration_cap) {
    check_cap(l.n(), enumeration_cap, "local_optima_census");
    const int n = l.n();
    const std::uint64_t total = std::uint64_t{1} << n;

    // Precompute all fitness values when that fits comfortably in memory;
    // the neighbor of index u in attribute i is u with bit (n-1-i) flipped.
    std::vector<double> values;
    const bool cache = n <= 20;
    if (cache) {
        values.resize(total);
        for (std::uint64_t u = 0; u < total; ++u)
            values[u] = fitness(l, config_from_index(u, n));
    }
    auto value_at = [&](std::uint64_t u) {
        return cache ? values[u] : fitness(l, config_from_index(u, n));
    };

    CensusResult result;
    for (std::uint64_t u = 0; u < total; ++u) {
        const double v = value_at(u);
        bool is_opt = true;
        for (int i = 0; i < n && is_opt; ++i)
            if (v <= value_at(u ^ (std::uint64_t{1} << (n - 1 - i)))) is_opt = false;
        if (is_opt) result.optima.push_back(config_from_index(u, n));
    }
    return result;
}

std::vector<Configuration> hamming_neighbors(const Configuration& c, int radius) {
    const int n = c.size();
    if (radius < 1 || radius > n)
        throw std::invalid_argument("radius must lie in [1, n], got " +
                                    std::to_string(radius));
    std::vector<Configuration> out;
    std::vector<int> flips(radius);
    std::iota(flips.begin(), flips.end(), 0);
    while (true) {
        Configuration d = c;
        for (int f : flips) d.bits[f] ^= 1u;
        out.push_back(std::move(d));
        // Next lexicographic combination of flip indices.
        int pos = radius - 1;
        while (pos >= 0 && flips[pos] == n - radius + pos) --pos;
        if (pos < 0) break;
        ++flips[pos];
        for (int t = pos + 1; t < radius; ++t) flips[t] = flips[t - 1] + 1;
    }
    return out;
}

std::string dump_tables(const Landscape& l) {
    std::ostringstream os;
    os << "nk-landscape v1\n";
    os << "n " << l.spec.n << " k " << l.spec.k << " pattern "
       << to_string(l.spec.pattern) << " seed " << l.spec.seed << "\n";
    os << "blocks";
    if (l.spec.block_sizes.empty()) {
        os << " -";
    } else {
        for (int b : l.spec.block_sizes) os << " " << b;
    }
    os << "\n";
    os << "# pattern index: bit0 = own state, bit(1+t) = state of partner t "
          "in listed order\n";
    for (int i = 0; i < l.n(); ++i) {
        os << "interactions " << i << " :";
        for (int j : l.interaction_sets[i]) os << " " << j;
        os << "\n";
    }
    char buf[64];
    for (int i = 0; i < l.n(); ++i) {
        for (std::size_t p = 0; p < l.tables[i].size(); ++p) {
            std::snprintf(buf, sizeof buf, "%.17g", l.tables[i][p]);
            os << "table " << i << " " << p << " " << buf << "\n";
        }
    }
    return os.str();
}

Landscape parse_tables(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    if (!std::getline(is, line) || line != "nk-landscape v1")
        throw std::invalid_argument("landscape dump: missing 'nk-landscape v1' header");

    LandscapeSpec spec;
    {
        if (!std::getline(is, line))
            throw std::invalid_argument("landscape dump: truncated header");
        std::istringstream ls(line);
        std::string kw_n, kw_k, kw_p, kw_s, pattern;
        ls >> kw_n >> spec.n >> kw_k >> spec.k >> kw_p >> pattern >> kw_s >> spec.seed;
        if (kw_n != "n" || kw_k != "k" || kw_p != "pattern" || kw_s != "seed" || !ls)
            throw std::invalid_argument("landscape dump: malformed header line");
        spec.pattern = pattern_from_string(pattern);
    }
    {
        if (!std::getline(is, line))
            throw std::invalid_argument("landscape dump: truncated blocks line");
        std::istringstream ls(line);
        std::string kw, tok;
        ls >> kw;
        if (kw != "blocks")
            throw std::invalid_argument("landscape dump: expected blocks line");
        while (ls >> tok)
            if (tok != "-") spec.block_sizes.push_back(std::stoi(tok));
    }

    std::vector<std::vector<int>> sets(spec.n > 0 ? spec.n : 0);
    std::vector<std::vector<double>> tables(spec.n > 0 ? spec.n : 0);
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "interactions") {
            int i;
            std::string colon;
            ls >> i >> colon;
            if (!ls || colon != ":" || i < 0 || i >= spec.n)
                throw std::invalid_argument("landscape dump: bad interactions line: " + line);
            int j;
            while (ls >> j) sets[i].push_back(j);
        } else if (kw == "table") {
            int i;
            std::size_t p;
            std::string value;
            ls >> i >> p >> value;
            if (!ls || i < 0 || i >= spec.n)
                throw std::invalid_argument("landscape dump: bad table line: " + line);
            if (tables[i].size() <= p) tables[i].resize(p + 1);
            tables[i][p] = std::strtod(value.c_str(), nullptr);
        } else {
            throw std::invalid_argument("landscape dump: unknown line: " + line);
        }
    }
    return from_parts(std::move(spec), std::move(sets), std::move(tables));
}

}  // namespace ace::nk
