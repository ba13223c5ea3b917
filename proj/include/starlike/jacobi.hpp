// jacobi.hpp - the Jacobi operator on a star-like graph: action on finitely
// supported vectors, moments, truncated matrices, potential rules, pasting.
#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <iterator>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "starlike/graph.hpp"

namespace starlike {

// Finitely supported vector; zero entries are kept absent.  Iteration order is
// the canonical vertex encoding.
template <class Scalar>
using FinVector = std::map<VertexId, Scalar>;

// (J psi)(v) = sum_{w ~ v} a_{v,w} psi(w) + b_v psi(v).  Support grows by at
// most one in graph distance.
template <class Scalar>
FinVector<Scalar> act(const StarLikeGraph& g, const FinVector<Scalar>& psi) {
    FinVector<Scalar> out;
    for (const auto& [v, x] : psi) {
        if (x == Scalar{}) continue;
        out[v] += g.potential(v) * x;
        for (const auto& [u, w] : neighbors(g, v)) out[u] += w * x;
    }
    for (auto it = out.begin(); it != out.end();)
        it = (it->second == Scalar{}) ? out.erase(it) : std::next(it);
    return out;
}

template <class Scalar>
Scalar dot(const FinVector<Scalar>& phi, const FinVector<Scalar>& psi) {
    Scalar sum{};
    auto i = phi.begin();
    auto j = psi.begin();
    while (i != phi.end() && j != psi.end()) {
        if (i->first < j->first)
            ++i;
        else if (j->first < i->first)
            ++j;
        else {
            sum += Eigen::numext::conj(i->second) * j->second;
            ++i, ++j;
        }
    }
    return sum;
}

template <class Scalar>
double norm(const FinVector<Scalar>& psi) {
    double sum = 0.0;
    for (const auto& [v, x] : psi) sum += Eigen::numext::abs2(x);
    return std::sqrt(sum);
}

// <delta_w, J^n delta_v>.
double moment(const StarLikeGraph& g, VertexId v, VertexId w, int n, long ball_cap = 10000);

// Dirichlet truncation keeping branch depths <= depth.
struct TruncationSpec {
    int depth = 1;
};

struct SparseSymMatrix {
    Eigen::SparseMatrix<double> mat;

    Eigen::Index dim() const { return mat.rows(); }
    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(mat); }
};

// Coordinate-list text: "dim nnz" then one "row col value" line per stored
// entry, 17 significant digits, sorted by (row, col).
void write_coordinate(const SparseSymMatrix& m, std::ostream& os);

// Vertex order of the truncation: compact vertices first, then branch sites
// by (branch, depth).
std::vector<VertexId> truncation_vertices(const StarLikeGraph& g, int depth);
Eigen::Index truncation_index(const StarLikeGraph& g, int depth, VertexId v);
SparseSymMatrix assemble_truncated(const StarLikeGraph& g, const TruncationSpec& spec);

// Standard potential rules; all have unit edge weights.
BranchCoefficients free_potential();
BranchCoefficients periodic_potential(std::vector<double> values);
// Barrier of height h*k^gamma at site l0^k, k = 1, 2, ...; zero elsewhere.
// The declared bound covers every barrier index addressable by a long.
BranchCoefficients sparse_power_potential(double h, double gamma, long l0);
// Counter-based draw keyed by (seed, stream, n): order and history free.
BranchCoefficients iid_uniform_potential(double lo, double hi, std::uint64_t seed,
                                         std::uint64_t stream = 0);

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t n);

// Coupled half-line Jacobi factors: compact component carries the coupling
// matrix A and the factors' first sites; branch rules shift by one site.
StarLikeGraph paste_halflines(const std::vector<BranchCoefficients>& factors,
                              const Eigen::MatrixXd& coupling);

}  // namespace starlike
