// jacobi.cpp - moments, truncated assembly, potential rules, pasting.
#include "starlike/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace starlike {

double moment(const StarLikeGraph& g, VertexId v, VertexId w, int n, long ball_cap) {
    if (n < 0) throw std::invalid_argument("moment order must be >= 0");
    if (ball_size(g, v, n) > ball_cap) throw std::invalid_argument("ball size cap exceeded");
    FinVector<double> psi{{v, 1.0}};
    for (int k = 0; k < n; ++k) psi = act(g, psi);
    const auto it = psi.find(w);
    return it == psi.end() ? 0.0 : it->second;
}

std::vector<VertexId> truncation_vertices(const StarLikeGraph& g, int depth) {
    if (depth < 1) throw std::invalid_argument("truncation depth must be >= 1");
    std::vector<VertexId> out;
    out.reserve(g.compact_size() + static_cast<std::size_t>(g.branch_count()) * depth);
    for (int c = 0; c < g.compact_size(); ++c) out.push_back(VertexId::compact(c));
    for (int i = 1; i <= g.branch_count(); ++i)
        for (int d = 1; d <= depth; ++d) out.push_back(VertexId::branch_site(i, d));
    return out;
}

Eigen::Index truncation_index(const StarLikeGraph& g, int depth, VertexId v) {
    if (depth < 1) throw std::invalid_argument("truncation depth must be >= 1");
    if (v.is_compact()) {
        if (v.index < 0 || v.index >= g.compact_size())
            throw std::invalid_argument("compact index out of range");
        return v.index;
    }
    if (v.branch < 1 || v.branch > g.branch_count())
        throw std::invalid_argument("branch index out of range");
    if (v.index < 1 || v.index > depth) throw std::invalid_argument("depth outside truncation");
    return g.compact_size() + static_cast<Eigen::Index>(v.branch - 1) * depth + (v.index - 1);
}

SparseSymMatrix assemble_truncated(const StarLikeGraph& g, const TruncationSpec& spec) {
    const int N = spec.depth;
    if (N < 1) throw std::invalid_argument("truncation depth must be >= 1");
    const Eigen::Index dim =
        g.compact_size() + static_cast<Eigen::Index>(g.branch_count()) * N;
    if (dim > 2'000'000) throw std::invalid_argument("memory guard: truncation too large");

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(3 * dim);
    for (int c = 0; c < g.compact_size(); ++c) {
        const double b = g.potential(VertexId::compact(c));
        if (b != 0.0) trip.emplace_back(c, c, b);
    }
    for (const auto& [u, v, w] : g.compact().edges) {
        trip.emplace_back(u, v, w);
        trip.emplace_back(v, u, w);
    }
    for (int i = 1; i <= g.branch_count(); ++i) {
        const auto& br = g.branch(i);
        Eigen::Index prev = g.attachment(i);
        for (int d = 1; d <= N; ++d) {
            const Eigen::Index cur = truncation_index(g, N, VertexId::branch_site(i, d));
            const double a = br.a(d);
            trip.emplace_back(prev, cur, a);
            trip.emplace_back(cur, prev, a);
            const double b = br.b(d);
            if (b != 0.0) trip.emplace_back(cur, cur, b);
            prev = cur;
        }
    }
    SparseSymMatrix out;
    out.mat.resize(dim, dim);
    out.mat.setFromTriplets(trip.begin(), trip.end());
    out.mat.makeCompressed();
    return out;
}

void write_coordinate(const SparseSymMatrix& m, std::ostream& os) {
    std::vector<std::tuple<Eigen::Index, Eigen::Index, double>> entries;
    for (int k = 0; k < m.mat.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m.mat, k); it; ++it)
            if (it.value() != 0.0) entries.emplace_back(it.row(), it.col(), it.value());
    std::sort(entries.begin(), entries.end());
    os << m.dim() << ' ' << entries.size() << '\n';
    char buf[40];
    for (const auto& [r, c, v] : entries) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << r << ' ' << c << ' ' << buf << '\n';
    }
}

BranchCoefficients free_potential() {
    return BranchCoefficients([](int) { return 1.0; }, [](int) { return 0.0; }, 1.0);
}

BranchCoefficients periodic_potential(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("periodic rule needs at least one value");
    double bound = 1.0;
    for (double v : values) bound = std::max(bound, std::abs(v));
    return BranchCoefficients([](int) { return 1.0; },
                              [values = std::move(values)](int n) {
                                  return values[(n - 1) % values.size()];
                              },
                              bound);
}

BranchCoefficients sparse_power_potential(double h, double gamma, long l0) {
    if (l0 < 2) throw std::invalid_argument("sparse spacing base must be >= 2");
    if (!(h > 0.0)) throw std::invalid_argument("barrier height must be > 0");
    // Largest barrier ordinal reachable while l0^k fits a long.
    int k_max = 0;
    for (long site = 1; site <= std::numeric_limits<long>::max() / l0;) {
        site *= l0;
        ++k_max;
    }
    double bound = 1.0;
    for (int k = 1; k <= k_max; ++k) bound = std::max(bound, h * std::pow(k, gamma));
    return BranchCoefficients([](int) { return 1.0; },
                              [h, gamma, l0](int n) -> double {
                                  long site = l0;
                                  for (int k = 1; site <= n; ++k, site *= l0)
                                      if (site == n) return h * std::pow(k, gamma);
                                  return 0.0;
                              },
                              bound);
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t n) {
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    return static_cast<double>(mix(seed ^ mix(stream ^ mix(n))) >> 11) * 0x1.0p-53;
}

BranchCoefficients iid_uniform_potential(double lo, double hi, std::uint64_t seed,
                                         std::uint64_t stream) {
    if (!(lo <= hi)) throw std::invalid_argument("empty uniform range");
    const double bound = std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    return BranchCoefficients([](int) { return 1.0; },
                              [lo, hi, seed, stream](int n) {
                                  return lo + (hi - lo) *
                                                  counter_uniform(seed, stream,
                                                                  static_cast<std::uint64_t>(n));
                              },
                              bound);
}

StarLikeGraph paste_halflines(const std::vector<BranchCoefficients>& factors,
                              const Eigen::MatrixXd& coupling) {
    const int n = static_cast<int>(factors.size());
    if (n < 1) throw std::invalid_argument("at least one factor required");
    if (coupling.rows() != n || coupling.cols() != n)
        throw std::invalid_argument("coupling size mismatch");
    CompactComponent compact;
    compact.size = n;
    for (int i = 0; i < n; ++i) {
        if (coupling(i, i) != 0.0) throw std::invalid_argument("coupling diagonal must vanish");
        compact.potential.push_back(factors[i].b(1));
        compact.attachments.push_back(i);
        for (int j = i + 1; j < n; ++j) {
            if (coupling(i, j) != coupling(j, i))
                throw std::invalid_argument("negative or asymmetric coupling");
            if (coupling(i, j) < 0.0) throw std::invalid_argument("negative or asymmetric coupling");
            if (coupling(i, j) > 0.0) compact.edges.push_back({i, j, coupling(i, j)});
        }
    }
    std::vector<BranchCoefficients> branches;
    for (const auto& f : factors)
        branches.emplace_back([f](int d) { return f.a(d + 1); }, [f](int d) { return f.b(d + 1); },
                              f.bound());
    return build_star_like(std::move(compact), std::move(branches));
}

}  // namespace starlike
