#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace starcli {
namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& s) {
    const auto pos = s.find_first_of("#;");
    return pos == std::string::npos ? s : s.substr(0, pos);
}

bool parse_real(const std::string& s, double& out) {
    const char* c = s.c_str();
    char* end = nullptr;
    out = std::strtod(c, &end);
    return end != c && *end == '\0';
}

bool parse_integer(const std::string& s, long& out) {
    const char* c = s.c_str();
    char* end = nullptr;
    out = std::strtol(c, &end, 10);
    return end != c && *end == '\0';
}

bool parse_counter(const std::string& s, std::uint64_t& out) {
    if (s.empty() || s[0] == '-') return false;
    const char* c = s.c_str();
    char* end = nullptr;
    out = std::strtoull(c, &end, 10);
    return end != c && *end == '\0';
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

// One file may carry sections for several commands; a run only consumes its
// own.  Unused sections pass the typo guard as long as they are vocabulary.
bool known_section(const std::string& name) {
    static const std::set<std::string> fixed = {
        "graph",     "spectrum",  "resolvent", "multiplicity",
        "subordinacy", "subordinacy.coeffs", "sharpness", "sharpness.v0",
        "dims",      "paths",     "tree",      "tree.level"};
    if (fixed.count(name)) return true;
    if (name.rfind("branch.", 0) == 0) {
        long idx;
        return parse_integer(name.substr(7), idx) && idx >= 1;
    }
    return false;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");

    Config cfg;
    cfg.path = path;
    auto diag = [&path](int line, const std::string& msg) {
        return ConfigError(path + ":" + std::to_string(line) + ": " + msg);
    };

    int lineno = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw diag(lineno, "malformed section header: " + line);
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) throw diag(lineno, "empty section name");
            for (const auto& s : cfg.sections_)
                if (s.name == name) throw diag(lineno, "duplicate section [" + name + "]");
            cfg.sections_.push_back({name, lineno, {}});
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw diag(lineno, "expected 'key = value': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw diag(lineno, "empty key");
        if (cfg.sections_.empty())
            throw diag(lineno, "key '" + key + "' outside any section");
        cfg.sections_.back().entries[key].push_back({value, lineno});
    }
    return cfg;
}

bool Config::has(const std::string& section) const { return find(section) != nullptr; }

const Section* Config::find(const std::string& section) const {
    for (const auto& s : sections_)
        if (s.name == section) {
            used_sections_.insert(section);
            return &s;
        }
    return nullptr;
}

const Section& Config::require(const std::string& section) const {
    const Section* s = find(section);
    if (!s) throw ConfigError(path + ": missing required section [" + section + "]");
    return *s;
}

void Config::check_consumed() const {
    for (const auto& s : sections_) {
        if (!used_sections_.count(s.name)) {
            if (!known_section(s.name))
                throw ConfigError(path + ":" + std::to_string(s.line) + ": unknown section [" +
                                  s.name + "]");
            continue;  // belongs to another command
        }
        for (const auto& [key, entries] : s.entries)
            if (!used_keys_.count(s.name + '\0' + key))
                throw ConfigError(path + ":" + std::to_string(entries.front().line) + ": [" +
                                  s.name + "] " + key + ": unknown key");
    }
}

void View::mark(const std::string& key) const { cfg_->used_keys_.insert(sec_->name + '\0' + key); }

void View::fail(const std::string& key, const std::string& msg) const {
    const auto it = sec_->entries.find(key);
    const int line = it != sec_->entries.end() ? it->second.front().line : sec_->line;
    throw ConfigError(cfg_->path + ":" + std::to_string(line) + ": [" + sec_->name + "] " + key +
                      ": " + msg);
}

bool View::has(const std::string& key) const {
    mark(key);
    return sec_->entries.count(key) > 0;
}

const Entry& View::single(const std::string& key) const {
    mark(key);
    const auto it = sec_->entries.find(key);
    if (it == sec_->entries.end()) fail(key, "missing required key");
    if (it->second.size() > 1) fail(key, "key given more than once");
    return it->second.front();
}

std::string View::text(const std::string& key) const { return single(key).value; }

std::string View::text(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
}

double View::real(const std::string& key) const {
    double v;
    if (!parse_real(single(key).value, v)) fail(key, "not a number: " + single(key).value);
    return v;
}

double View::real(const std::string& key, double fallback) const {
    return has(key) ? real(key) : fallback;
}

double View::positive(const std::string& key, double fallback) const {
    const double v = real(key, fallback);
    if (!(v > 0.0)) fail(key, "must be positive");
    return v;
}

long View::integer(const std::string& key) const {
    long v;
    if (!parse_integer(single(key).value, v)) fail(key, "not an integer: " + single(key).value);
    return v;
}

long View::integer(const std::string& key, long fallback) const {
    return has(key) ? integer(key) : fallback;
}

std::uint64_t View::counter(const std::string& key) const {
    std::uint64_t v;
    if (!parse_counter(single(key).value, v))
        fail(key, "not an unsigned integer: " + single(key).value);
    return v;
}

std::uint64_t View::counter(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? counter(key) : fallback;
}

std::vector<double> View::reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& tok : split_ws(single(key).value)) {
        double v;
        if (!parse_real(tok, v)) fail(key, "not a number: " + tok);
        out.push_back(v);
    }
    if (out.empty()) fail(key, "empty value");
    return out;
}

std::vector<long> View::integers(const std::string& key) const {
    std::vector<long> out;
    for (const auto& tok : split_ws(single(key).value)) {
        long v;
        if (!parse_integer(tok, v)) fail(key, "not an integer: " + tok);
        out.push_back(v);
    }
    if (out.empty()) fail(key, "empty value");
    return out;
}

std::vector<const Entry*> View::repeated(const std::string& key) const {
    mark(key);
    std::vector<const Entry*> out;
    const auto it = sec_->entries.find(key);
    if (it != sec_->entries.end())
        for (const auto& e : it->second) out.push_back(&e);
    return out;
}

starlike::BranchCoefficients make_rule(const Config& cfg, const std::string& section,
                                       std::uint64_t default_stream) {
    const View v(cfg, cfg.require(section));
    const std::string rule = v.text("rule");

    if (rule == "free") return starlike::free_potential();

    if (rule == "periodic") {
        const auto values = v.reals("values");
        return starlike::periodic_potential(values);
    }

    if (rule == "sparse_power") {
        const double h = v.real("h");
        const double gamma = v.real("gamma");
        const long l0 = v.integer("l0");
        if (l0 < 2) v.fail("l0", "must be >= 2");
        return starlike::sparse_power_potential(h, gamma, l0);
    }

    if (rule == "iid_uniform") {
        const double lo = v.real("lo");
        const double hi = v.real("hi");
        if (!(lo <= hi)) v.fail("hi", "must be >= lo");
        if (!v.has("seed")) v.fail("seed", "randomized rule needs an explicit seed");
        const std::uint64_t seed = v.counter("seed");
        const std::uint64_t stream = v.counter("stream", default_stream);
        return starlike::iid_uniform_potential(lo, hi, seed, stream);
    }

    v.fail("rule", "unknown rule '" + rule +
                       "' (expected free, periodic, sparse_power, iid_uniform)");
}

starlike::StarLikeGraph make_graph(const Config& cfg) {
    const View g(cfg, cfg.require("graph"));

    const long n = g.integer("compact_size");
    if (n < 1) g.fail("compact_size", "must be >= 1");

    starlike::CompactComponent compact;
    compact.size = static_cast<int>(n);
    if (g.has("potential")) {
        compact.potential = g.reals("potential");
        if (static_cast<long>(compact.potential.size()) != n)
            g.fail("potential", "expected " + std::to_string(n) + " values");
    } else {
        compact.potential.assign(n, 0.0);
    }

    for (const Entry* e : g.repeated("edge")) {
        const auto tok = split_ws(e->value);
        long a, b;
        double w;
        if (tok.size() != 3 || !parse_integer(tok[0], a) || !parse_integer(tok[1], b) ||
            !parse_real(tok[2], w))
            throw ConfigError(cfg.path + ":" + std::to_string(e->line) +
                              ": [graph] edge: expected '<i> <j> <weight>', got: " + e->value);
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw ConfigError(cfg.path + ":" + std::to_string(e->line) +
                              ": [graph] edge: vertex index out of range: " + e->value);
        compact.edges.emplace_back(static_cast<int>(a), static_cast<int>(b), w);
    }

    const auto att = g.integers("attachments");
    for (const long a : att)
        if (a < 0 || a >= n) g.fail("attachments", "vertex index out of range");
    compact.attachments.assign(att.begin(), att.end());

    std::vector<starlike::BranchCoefficients> branches;
    for (std::size_t i = 1; i <= att.size(); ++i)
        branches.push_back(make_rule(cfg, "branch." + std::to_string(i), i));

    try {
        return starlike::build_star_like(compact, branches);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(cfg.path + ": [graph]: " + e.what());
    }
}

}  // namespace starcli
