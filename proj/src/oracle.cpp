// oracle.cpp - dense reference implementations.
#include "starlike/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

namespace starlike::oracle {

DenseSpectrum dense_eig(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("matrix not square");
    if (a.rows() > 5000) throw std::invalid_argument("dense cap exceeded");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("matrix not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolve failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

std::complex<double> dense_resolvent(const Eigen::MatrixXd& a, std::complex<double> z, int u,
                                     int v) {
    if (a.rows() != a.cols()) throw std::invalid_argument("matrix not square");
    if (u < 0 || v < 0 || u >= a.rows() || v >= a.rows())
        throw std::invalid_argument("index out of range");
    if (z.imag() == 0.0) throw std::invalid_argument("resolvent needs Im z != 0");
    Eigen::MatrixXcd shifted = a.cast<std::complex<double>>();
    shifted.diagonal().array() -= z;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(a.rows());
    rhs(v) = 1.0;
    return shifted.partialPivLu().solve(rhs)(u);
}

Eigen::MatrixXcd dense_resolvent_corner(const Eigen::MatrixXd& a, std::complex<double> z,
                                        int corner) {
    if (corner < 1 || corner > a.rows()) throw std::invalid_argument("corner out of range");
    if (z.imag() == 0.0) throw std::invalid_argument("resolvent needs Im z != 0");
    Eigen::MatrixXcd shifted = a.cast<std::complex<double>>();
    shifted.diagonal().array() -= z;
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(a.rows(), corner);
    rhs.topRows(corner).setIdentity();
    return shifted.partialPivLu().solve(rhs).topRows(corner);
}

std::vector<std::pair<double, double>> atomic_measures(const Eigen::MatrixXd& a, int u, int v,
                                                       double group_tol) {
    const DenseSpectrum s = dense_eig(a);
    if (u < 0 || v < 0 || u >= a.rows() || v >= a.rows())
        throw std::invalid_argument("index out of range");
    const int n = static_cast<int>(s.eigenvalues.size());
    const double tol =
        group_tol > 0.0 ? group_tol : 1e-8 * (1.0 + s.eigenvalues.cwiseAbs().maxCoeff());
    std::vector<std::pair<double, double>> out;
    int k = 0;
    while (k < n) {
        int j = k;
        while (j + 1 < n && s.eigenvalues(j + 1) - s.eigenvalues(j) <= tol) ++j;
        double energy = 0.0, weight = 0.0;
        for (int i = k; i <= j; ++i) {
            energy += s.eigenvalues(i);
            weight += s.eigenvectors(u, i) * s.eigenvectors(v, i);
        }
        out.push_back({energy / (j - k + 1), weight});
        k = j + 1;
    }
    return out;
}

namespace {

// Self-contained adjacency over the compact component plus branch sites up to
// a fixed depth, keyed by the canonical vertex encoding.
std::map<VertexId, std::vector<std::pair<VertexId, double>>> local_adjacency(
    const StarLikeGraph& g, int max_depth) {
    std::map<VertexId, std::vector<std::pair<VertexId, double>>> adj;
    for (int c = 0; c < g.compact_size(); ++c) adj[VertexId::compact(c)];
    for (const auto& [x, y, w] : g.compact().edges) {
        adj[VertexId::compact(x)].push_back({VertexId::compact(y), w});
        adj[VertexId::compact(y)].push_back({VertexId::compact(x), w});
    }
    for (int i = 1; i <= g.branch_count(); ++i) {
        VertexId prev = VertexId::compact(g.attachment(i));
        for (int d = 1; d <= max_depth; ++d) {
            const VertexId cur = VertexId::branch_site(i, d);
            const double w = g.branch(i).a(d);
            adj[prev].push_back({cur, w});
            adj[cur].push_back({prev, w});
            prev = cur;
        }
    }
    for (auto& [key, list] : adj) std::sort(list.begin(), list.end());
    return adj;
}

double walk_sum(const std::map<VertexId, std::vector<std::pair<VertexId, double>>>& adj,
                const std::map<VertexId, int>& dist_to_target, VertexId cur, VertexId target,
                int remaining) {
    if (remaining == 0) return cur == target ? 1.0 : 0.0;
    double total = 0.0;
    for (const auto& [next, w] : adj.at(cur)) {
        const auto it = dist_to_target.find(next);
        if (it == dist_to_target.end() || it->second > remaining - 1) continue;
        total += w * walk_sum(adj, dist_to_target, next, target, remaining - 1);
    }
    return total;
}

}  // namespace

double brute_paths(const StarLikeGraph& g, VertexId v, VertexId w, int n) {
    if (n < 0) throw std::invalid_argument("path length must be >= 0");
    if (n > 12) throw std::invalid_argument("path explosion guard");
    const int max_depth = std::max(v.depth(), w.depth()) + n + 1;
    const auto adj = local_adjacency(g, max_depth);
    if (!adj.count(v) || !adj.count(w)) throw std::invalid_argument("vertex out of range");

    std::map<VertexId, int> dist;
    std::deque<VertexId> queue{w};
    dist[w] = 0;
    while (!queue.empty()) {
        const VertexId cur = queue.front();
        queue.pop_front();
        for (const auto& [next, wt] : adj.at(cur))
            if (!dist.count(next)) {
                dist[next] = dist[cur] + 1;
                queue.push_back(next);
            }
    }
    const auto it = dist.find(v);
    if (it == dist.end() || it->second != n) throw std::invalid_argument("not on boundary sphere");
    return walk_sum(adj, dist, v, w, n);
}

Eigen::MatrixXd dense_truncation(const StarLikeGraph& g, int depth) {
    if (depth < 1) throw std::invalid_argument("truncation depth must be >= 1");
    const int nk = g.compact_size();
    const int m = g.branch_count();
    const Eigen::Index dim = nk + static_cast<Eigen::Index>(m) * depth;
    if (dim > 5000) throw std::invalid_argument("dense cap exceeded");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    for (int c = 0; c < nk; ++c) a(c, c) = g.compact().potential[c];
    for (const auto& [x, y, w] : g.compact().edges) {
        a(x, y) = w;
        a(y, x) = w;
    }
    for (int i = 1; i <= m; ++i) {
        Eigen::Index prev = g.attachment(i);
        for (int d = 1; d <= depth; ++d) {
            const Eigen::Index cur = nk + static_cast<Eigen::Index>(i - 1) * depth + (d - 1);
            a(prev, cur) = a(cur, prev) = g.branch(i).a(d);
            a(cur, cur) = g.branch(i).b(d);
            prev = cur;
        }
    }
    return a;
}

}  // namespace starlike::oracle
