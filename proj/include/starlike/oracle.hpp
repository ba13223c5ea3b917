// oracle.hpp - independent dense reference routes used by the test suites.
// Everything here recomputes from first principles (dense eigensolves, direct
// linear solves, raw walk enumeration) and shares no numerical kernels with
// the primary modules.
#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "starlike/graph.hpp"

namespace starlike::oracle {

struct DenseSpectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
};

// Full symmetric eigensolve; refuses dim > 5000.
DenseSpectrum dense_eig(const Eigen::MatrixXd& a);

// Entry u of (a - z)^{-1} delta_v by a direct linear solve.
std::complex<double> dense_resolvent(const Eigen::MatrixXd& a, std::complex<double> z, int u,
                                     int v);

// Full matrix (a - z)^{-1} restricted to the leading corner columns.
Eigen::MatrixXcd dense_resolvent_corner(const Eigen::MatrixXd& a, std::complex<double> z,
                                        int corner);

// Atoms (E_k, <P_k delta_u, delta_v>) of the spectral measure mu_{u,v};
// eigenvalues closer than group_tol are merged into one eigenspace.
// group_tol <= 0 picks 1e-8 * (1 + max |E_k|).
std::vector<std::pair<double, double>> atomic_measures(const Eigen::MatrixXd& a, int u, int v,
                                                       double group_tol = -1.0);

// Same contract as beta_coefficient, by raw recursive walk enumeration over a
// locally rebuilt adjacency table.
double brute_paths(const StarLikeGraph& g, VertexId v, VertexId w, int n);

// Dense Dirichlet truncation assembled directly from the graph data, in the
// canonical vertex order (compact first, then branch sites by (branch, depth)).
Eigen::MatrixXd dense_truncation(const StarLikeGraph& g, int depth);

}  // namespace starlike::oracle
