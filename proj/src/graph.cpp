// graph.cpp - construction, metric and path machinery for star-like graphs.
#include "starlike/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace starlike {

BranchCoefficients::BranchCoefficients(std::function<double(int)> a, std::function<double(int)> b,
                                       double bound)
    : a_fn_(std::move(a)), b_fn_(std::move(b)), bound_(bound) {
    if (!a_fn_ || !b_fn_) throw std::invalid_argument("branch rule missing");
    if (!(bound_ > 0.0) || !std::isfinite(bound_))
        throw std::invalid_argument("unbounded rule declared");
}

double BranchCoefficients::a(int n) const {
    if (n < 1) throw std::invalid_argument("branch coefficient index must be >= 1");
    const double v = a_fn_(n);
    if (!(v > 0.0)) throw std::invalid_argument("non-positive weight");
    if (!(v <= bound_)) throw std::invalid_argument("rule exceeds declared bound");
    return v;
}

double BranchCoefficients::b(int n) const {
    if (n < 1) throw std::invalid_argument("branch coefficient index must be >= 1");
    const double v = b_fn_(n);
    if (!(std::abs(v) <= bound_)) throw std::invalid_argument("rule exceeds declared bound");
    return v;
}

StarLikeGraph::StarLikeGraph(CompactComponent compact, std::vector<BranchCoefficients> branches)
    : compact_(std::move(compact)), branches_(std::move(branches)) {
    const int n = compact_.size;
    if (n < 1) throw std::invalid_argument("compact component is empty");
    if (static_cast<int>(compact_.potential.size()) != n)
        throw std::invalid_argument("potential size mismatch");
    if (branches_.empty()) throw std::invalid_argument("at least one branch required");
    if (compact_.attachments.size() != branches_.size())
        throw std::invalid_argument("attachment/branch count mismatch");

    adj_.assign(n, {});
    std::set<std::pair<int, int>> seen;
    for (const auto& [u, v, w] : compact_.edges) {
        if (u < 0 || u >= n || v < 0 || v >= n) throw std::invalid_argument("edge index out of range");
        if (u == v) throw std::invalid_argument("self loop");
        if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("non-positive weight");
        if (!seen.insert({std::min(u, v), std::max(u, v)}).second)
            throw std::invalid_argument("duplicate edge");
        adj_[u].push_back({v, w});
        adj_[v].push_back({u, w});
    }
    for (auto& list : adj_) std::sort(list.begin(), list.end());

    branch_at_.assign(n, 0);
    for (std::size_t i = 0; i < compact_.attachments.size(); ++i) {
        const int c = compact_.attachments[i];
        if (c < 0 || c >= n) throw std::invalid_argument("attachment index out of range");
        if (branch_at_[c] != 0) throw std::invalid_argument("duplicate attachment vertex");
        branch_at_[c] = static_cast<int>(i) + 1;
    }

    // Hop distances inside the compact component; BFS also checks connectivity.
    kdist_.setConstant(n, n, -1);
    for (int s = 0; s < n; ++s) {
        std::deque<int> queue{s};
        kdist_(s, s) = 0;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (const auto& [v, w] : adj_[u]) {
                if (kdist_(s, v) < 0) {
                    kdist_(s, v) = kdist_(s, u) + 1;
                    queue.push_back(v);
                }
            }
        }
        for (int v = 0; v < n; ++v)
            if (kdist_(s, v) < 0) throw std::invalid_argument("compact component disconnected");
    }
}

const BranchCoefficients& StarLikeGraph::branch(int i) const {
    if (i < 1 || i > branch_count()) throw std::invalid_argument("branch index out of range");
    return branches_[i - 1];
}

int StarLikeGraph::attachment(int i) const {
    if (i < 1 || i > branch_count()) throw std::invalid_argument("branch index out of range");
    return compact_.attachments[i - 1];
}

int StarLikeGraph::branch_at(int c) const {
    if (c < 0 || c >= compact_.size) throw std::invalid_argument("compact index out of range");
    return branch_at_[c];
}

double StarLikeGraph::potential(VertexId v) const {
    if (v.is_compact()) {
        if (v.index < 0 || v.index >= compact_.size)
            throw std::invalid_argument("compact index out of range");
        return compact_.potential[v.index];
    }
    if (v.index < 1) throw std::invalid_argument("branch depth must be >= 1");
    return branch(v.branch).b(v.index);
}

double StarLikeGraph::coefficient_bound() const {
    double bound = 0.0;
    for (const auto& [u, v, w] : compact_.edges) bound = std::max(bound, w);
    for (double p : compact_.potential) bound = std::max(bound, std::abs(p));
    for (const auto& br : branches_) bound = std::max(bound, br.bound());
    return bound;
}

int StarLikeGraph::compact_distance(int u, int v) const {
    if (u < 0 || u >= compact_.size || v < 0 || v >= compact_.size)
        throw std::invalid_argument("compact index out of range");
    return kdist_(u, v);
}

const std::vector<std::pair<int, double>>& StarLikeGraph::compact_neighbors(int c) const {
    if (c < 0 || c >= compact_.size) throw std::invalid_argument("compact index out of range");
    return adj_[c];
}

StarLikeGraph build_star_like(CompactComponent compact, std::vector<BranchCoefficients> branches) {
    return StarLikeGraph(std::move(compact), std::move(branches));
}

std::vector<std::pair<VertexId, double>> neighbors(const StarLikeGraph& g, VertexId v) {
    std::vector<std::pair<VertexId, double>> out;
    if (v.is_compact()) {
        for (const auto& [u, w] : g.compact_neighbors(v.index)) out.push_back({VertexId::compact(u), w});
        if (const int i = g.branch_at(v.index); i != 0)
            out.push_back({VertexId::branch_site(i, 1), g.branch(i).a(1)});
        return out;
    }
    const int i = v.branch;
    const int n = v.index;
    if (n < 1) throw std::invalid_argument("branch depth must be >= 1");
    if (n == 1)
        out.push_back({VertexId::compact(g.attachment(i)), g.branch(i).a(1)});
    else
        out.push_back({VertexId::branch_site(i, n - 1), g.branch(i).a(n)});
    out.push_back({VertexId::branch_site(i, n + 1), g.branch(i).a(n + 1)});
    return out;
}

int distance(const StarLikeGraph& g, VertexId u, VertexId v) {
    if (u.is_compact() && v.is_compact()) return g.compact_distance(u.index, v.index);
    if (u.is_compact()) std::swap(u, v);
    // u is now a branch vertex.
    if (v.is_compact()) return u.index + g.compact_distance(g.attachment(u.branch), v.index);
    if (u.branch == v.branch) return std::abs(u.index - v.index);
    return u.index + g.compact_distance(g.attachment(u.branch), g.attachment(v.branch)) + v.index;
}

long ball_size(const StarLikeGraph& g, VertexId v, int radius) {
    if (radius < 0) throw std::invalid_argument("radius must be >= 0");
    long count = 0;
    for (int c = 0; c < g.compact_size(); ++c)
        if (distance(g, v, VertexId::compact(c)) <= radius) ++count;
    for (int i = 1; i <= g.branch_count(); ++i) {
        // Depths d >= 1 reachable within the radius form an interval.
        if (v.branch == i) {
            const int lo = std::max(1, v.index - radius);
            const int hi = v.index + radius;
            count += hi - lo + 1;
        } else {
            const int via = distance(g, v, VertexId::compact(g.attachment(i)));
            if (via < radius) count += radius - via;
        }
    }
    return count;
}

std::vector<VertexId> ball(const StarLikeGraph& g, VertexId v, int radius, long cap) {
    if (ball_size(g, v, radius) > cap) throw std::invalid_argument("ball size cap exceeded");
    std::vector<VertexId> out;
    for (int c = 0; c < g.compact_size(); ++c)
        if (distance(g, v, VertexId::compact(c)) <= radius) out.push_back(VertexId::compact(c));
    for (int i = 1; i <= g.branch_count(); ++i) {
        int lo = 1, hi = 0;
        if (v.branch == i) {
            lo = std::max(1, v.index - radius);
            hi = v.index + radius;
        } else {
            const int via = distance(g, v, VertexId::compact(g.attachment(i)));
            hi = radius - via;
        }
        for (int d = lo; d <= hi; ++d) out.push_back(VertexId::branch_site(i, d));
    }
    return out;
}

namespace {

void check_path_caps(const StarLikeGraph& g, VertexId v, VertexId w, int n, const PathCaps& caps) {
    if (n < 0) throw std::invalid_argument("path length must be >= 0");
    if (n > caps.max_length) throw std::invalid_argument("path explosion guard");
    if (ball_size(g, v, n) > caps.max_ball) throw std::invalid_argument("ball size cap exceeded");
    (void)w;
}

void path_dfs(const StarLikeGraph& g, VertexId w, int remaining, std::vector<VertexId>& stack,
              std::vector<std::vector<VertexId>>& out) {
    if (remaining == 0) {
        if (stack.back() == w) out.push_back(stack);
        return;
    }
    for (const auto& [u, wt] : neighbors(g, stack.back())) {
        if (distance(g, u, w) > remaining - 1) continue;
        stack.push_back(u);
        path_dfs(g, w, remaining - 1, stack, out);
        stack.pop_back();
    }
}

}  // namespace

std::vector<std::vector<VertexId>> enumerate_paths(const StarLikeGraph& g, VertexId v, VertexId w,
                                                   int n, const PathCaps& caps) {
    check_path_caps(g, v, w, n, caps);
    std::vector<std::vector<VertexId>> out;
    if (distance(g, v, w) > n) return out;
    std::vector<VertexId> stack{v};
    path_dfs(g, w, n, stack, out);
    return out;
}

double beta_coefficient(const StarLikeGraph& g, VertexId v, VertexId w, int n,
                        const PathCaps& caps) {
    check_path_caps(g, v, w, n, caps);
    if (distance(g, v, w) != n) throw std::invalid_argument("not on boundary sphere");
    // Hop-weight dynamic program: b plays no role on the boundary sphere.
    std::map<VertexId, double> front{{v, 1.0}};
    for (int step = 0; step < n; ++step) {
        std::map<VertexId, double> next;
        for (const auto& [u, c] : front)
            for (const auto& [x, wt] : neighbors(g, u)) next[x] += wt * c;
        front = std::move(next);
    }
    const auto it = front.find(w);
    return it == front.end() ? 0.0 : it->second;
}

StarLikeGraph build_sht(const std::vector<int>& branching, const BranchCoefficients& level,
                        double root_potential) {
    for (int b : branching)
        if (b < 1) throw std::invalid_argument("branching numbers must be >= 1");
    int stable = 0;  // last sphere with branching != 1
    for (std::size_t j = 0; j < branching.size(); ++j)
        if (branching[j] != 1) stable = static_cast<int>(j) + 1;

    // Compact component: spheres 0..stable in breadth-first order.
    std::vector<int> sphere_start{0};
    int total = 1;
    int sphere = 1;
    for (int n = 1; n <= stable; ++n) {
        sphere *= branching[n - 1];
        sphere_start.push_back(total);
        total += sphere;
    }

    CompactComponent compact;
    compact.size = total;
    compact.potential.assign(total, root_potential);
    for (int n = 1; n <= stable; ++n) {
        const int parents = sphere_start[n] - sphere_start[n - 1];
        const int width = branching[n - 1];
        for (int p = 0; p < parents; ++p)
            for (int c = 0; c < width; ++c) {
                const int child = sphere_start[n] + p * width + c;
                compact.edges.push_back({sphere_start[n - 1] + p, child, level.a(n)});
                compact.potential[child] = level.b(n);
            }
    }
    for (int v = sphere_start[stable]; v < total; ++v) compact.attachments.push_back(v);

    std::vector<BranchCoefficients> branches;
    const int shift = stable;
    for (int v = sphere_start[stable]; v < total; ++v)
        branches.emplace_back([level, shift](int n) { return level.a(shift + n); },
                              [level, shift](int n) { return level.b(shift + n); }, level.bound());
    return build_star_like(std::move(compact), std::move(branches));
}

TreeDimension tree_dimension(const std::vector<int>& branching, long n_max) {
    if (n_max < 2) throw std::invalid_argument("n_max must be >= 2");
    for (int b : branching)
        if (b < 1) throw std::invalid_argument("branching numbers must be >= 1");
    TreeDimension out;
    out.partial.reserve(n_max - 1);
    double log_sphere = 0.0;
    double log_ball = 0.0;  // log|B_0| = 0
    for (long n = 1; n <= n_max; ++n) {
        if (n <= static_cast<long>(branching.size())) log_sphere += std::log(branching[n - 1]);
        // log(e^log_ball + e^log_sphere)
        const double hi = std::max(log_ball, log_sphere);
        log_ball = hi + std::log(std::exp(log_ball - hi) + std::exp(log_sphere - hi));
        if (n >= 2) out.partial.push_back(log_ball / std::log(static_cast<double>(n)));
    }
    out.value = out.partial.back();
    return out;
}

double sht_ball_size(const std::vector<int>& branching, long n) {
    if (n < 0) throw std::invalid_argument("radius must be >= 0");
    double sphere = 1.0;
    double total = 1.0;
    for (long j = 1; j <= n; ++j) {
        if (j <= static_cast<long>(branching.size())) sphere *= branching[j - 1];
        total += sphere;
    }
    return total;
}

}  // namespace starlike
