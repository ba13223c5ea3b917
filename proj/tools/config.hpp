#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <starlike/graph.hpp>
#include <starlike/jacobi.hpp>

namespace starcli {

// Any config defect; the message carries file/line/field context already.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Entry {
    std::string value;
    int line = 0;
};

struct Section {
    std::string name;
    int line = 0;
    std::map<std::string, std::vector<Entry>> entries;  // keys may repeat
};

// INI-style file: [section] headers, key = value lines, # and ; comments.
class Config {
public:
    static Config parse_file(const std::string& path);

    bool has(const std::string& section) const;
    const Section& require(const std::string& section) const;
    const Section* find(const std::string& section) const;

    // Typo guard: every section and every key must have been read.
    void check_consumed() const;

    std::string path;

private:
    std::vector<Section> sections_;
    mutable std::set<std::string> used_sections_;
    mutable std::set<std::string> used_keys_;
    friend class View;
};

// Typed access to one section with field-level diagnostics.
class View {
public:
    View(const Config& cfg, const Section& sec) : cfg_(&cfg), sec_(&sec) {}

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

    bool has(const std::string& key) const;
    std::string text(const std::string& key) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    double real(const std::string& key) const;
    double real(const std::string& key, double fallback) const;
    double positive(const std::string& key, double fallback) const;
    long integer(const std::string& key) const;
    long integer(const std::string& key, long fallback) const;
    std::uint64_t counter(const std::string& key) const;
    std::uint64_t counter(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> reals(const std::string& key) const;
    std::vector<long> integers(const std::string& key) const;
    std::vector<const Entry*> repeated(const std::string& key) const;

    const std::string& name() const { return sec_->name; }

private:
    const Entry& single(const std::string& key) const;
    void mark(const std::string& key) const;

    const Config* cfg_;
    const Section* sec_;
};

// Branch coefficient rule from a config section (rule = free | periodic |
// sparse_power | iid_uniform). Randomized rules must carry a seed; stream
// defaults to `default_stream` so shared-seed branches stay independent.
starlike::BranchCoefficients make_rule(const Config& cfg, const std::string& section,
                                       std::uint64_t default_stream);

// Star-like graph from [graph] plus [branch.1] .. [branch.m].
starlike::StarLikeGraph make_graph(const Config& cfg);

}  // namespace starcli
