#include "helpers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

namespace testutil {

StarLikeGraph rooted_halfline(const BranchCoefficients& c, double b_root) {
    CompactComponent k;
    k.size = 1;
    k.potential = {b_root};
    k.attachments = {0};
    return build_star_like(std::move(k), {c});
}

StarLikeGraph free_star(int m) {
    CompactComponent k;
    k.size = m + 1;
    k.potential.assign(m + 1, 0.0);
    for (int i = 1; i <= m; ++i) {
        k.edges.push_back({0, i, 1.0});
        k.attachments.push_back(i);
    }
    std::vector<BranchCoefficients> br(m, free_potential());
    return build_star_like(std::move(k), std::move(br));
}

StarLikeGraph compact_path_graph(const std::vector<double>& weights) {
    CompactComponent k;
    k.size = static_cast<int>(weights.size()) + 1;
    k.potential.assign(k.size, 0.0);
    for (int i = 0; i < static_cast<int>(weights.size()); ++i)
        k.edges.push_back({i, i + 1, weights[i]});
    k.attachments = {0};
    return build_star_like(std::move(k), {free_potential()});
}

StarLikeGraph four_cycle_graph(double a1, double a2, double a3, double a4) {
    CompactComponent k;
    k.size = 4;
    k.potential.assign(4, 0.0);
    k.edges = {{0, 1, a1}, {1, 2, a2}, {2, 3, a3}, {0, 3, a4}};
    k.attachments = {0};
    return build_star_like(std::move(k), {free_potential()});
}

BranchCoefficients random_iid_coefficients(double a_lo, double a_hi, double b_lo, double b_hi,
                                           std::uint64_t seed, std::uint64_t stream) {
    const double bound =
        std::max({a_hi, std::abs(b_lo), std::abs(b_hi), 1e-12});
    return BranchCoefficients(
        [=](int n) {
            return a_lo + (a_hi - a_lo) * counter_uniform(seed, 2 * stream, n);
        },
        [=](int n) {
            return b_lo + (b_hi - b_lo) * counter_uniform(seed, 2 * stream + 1, n);
        },
        bound);
}

StarLikeGraph random_graph(std::mt19937_64& rng, const RandomGraphSpec& spec) {
    std::uniform_real_distribution<double> aw(spec.a_lo, spec.a_hi);
    std::uniform_real_distribution<double> bw(spec.b_lo, spec.b_hi);
    const int n = std::uniform_int_distribution<int>(1, spec.max_compact)(rng);

    CompactComponent k;
    k.size = n;
    for (int i = 0; i < n; ++i) k.potential.push_back(bw(rng));

    std::set<std::pair<int, int>> used;
    for (int i = 0; i + 1 < n; ++i) {
        k.edges.push_back({i, i + 1, aw(rng)});
        used.insert({i, i + 1});
    }
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int t = 0; t < spec.extra_edges && n >= 3; ++t) {
        int u = pick(rng), v = pick(rng);
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        if (!used.insert({u, v}).second) continue;
        k.edges.push_back({u, v, aw(rng)});
    }

    const int m = std::uniform_int_distribution<int>(1, std::min(spec.max_branches, n))(rng);
    std::vector<int> verts(n);
    std::iota(verts.begin(), verts.end(), 0);
    std::shuffle(verts.begin(), verts.end(), rng);

    std::vector<BranchCoefficients> branches;
    for (int i = 0; i < m; ++i) {
        k.attachments.push_back(verts[i]);
        const int kinds = spec.unit_branch_weights ? 3 : 4;
        switch (std::uniform_int_distribution<int>(0, kinds - 1)(rng)) {
            case 0:
                branches.push_back(free_potential());
                break;
            case 1: {
                const int p = std::uniform_int_distribution<int>(1, 3)(rng);
                std::vector<double> vals;
                for (int j = 0; j < p; ++j) vals.push_back(bw(rng));
                branches.push_back(periodic_potential(std::move(vals)));
                break;
            }
            case 2:
                branches.push_back(iid_uniform_potential(spec.b_lo, spec.b_hi, rng(), i + 1));
                break;
            default:
                branches.push_back(random_iid_coefficients(spec.a_lo, spec.a_hi, spec.b_lo,
                                                           spec.b_hi, rng(), i + 1));
                break;
        }
    }
    return build_star_like(std::move(k), std::move(branches));
}

}  // namespace testutil
