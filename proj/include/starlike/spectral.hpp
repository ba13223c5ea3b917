// spectral.hpp - Borel transforms on the compact component, ratio limits
// along a shrinking epsilon schedule, multiplicity estimates, generalized
// eigenfunctions and branch reconstruction.
#pragma once

#include <complex>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "starlike/graph.hpp"
#include "starlike/halfline.hpp"
#include "starlike/jacobi.hpp"

namespace starlike {

struct ResolventOptions {
    double m_tol = 1e-11;
    long m_depth_cap = 1L << 20;
};

// Schur complement of the resolvent on the compact component:
// M(z) = (J_K - z - D(z))^{-1}, where D(z) adds a_i(1)^2 m_i(z) at the
// attachment vertex of branch i.
struct ResolventMatrixK {
    std::complex<double> z;
    Eigen::MatrixXcd entries;

    std::complex<double> trace() const { return entries.trace(); }
};

ResolventMatrixK resolvent_K(const StarLikeGraph& g, std::complex<double> z,
                             const ResolventOptions& opt = {});

// Borel transform of mu_{u,v} at z, for u, v in the compact component.
std::complex<double> borel_uv(const StarLikeGraph& g, std::complex<double> z, VertexId u,
                              VertexId v, const ResolventOptions& opt = {});

struct EpsSchedule {
    double eps0 = 1e-1;
    double factor = 0.5;
    int count = 20;

    double eps(int k) const;
};

// Source of the K-corner resolvent matrix at z.  The graph route wraps
// resolvent_K; tests substitute dense finite-matrix sources.  Sources signal
// numerical non-convergence by throwing std::runtime_error, which truncates
// the schedule instead of failing the sample.
using BorelSource = std::function<Eigen::MatrixXcd(std::complex<double>)>;

BorelSource graph_borel_source(const StarLikeGraph& g, const ResolventOptions& opt = {});

struct RatioResult {
    double value = 0.0;  // Re of the ratio at the smallest epsilon reached
    bool converged = false;
    bool singular = false;
    double eps_min = 0.0;
    std::vector<std::complex<double>> history;
};

RatioResult poltoratskii_ratio(const BorelSource& src, int dim, double E,
                               const EpsSchedule& sched, int u, int v);
RatioResult poltoratskii_ratio(const StarLikeGraph& g, double E, const EpsSchedule& sched,
                               VertexId u, VertexId v, const ResolventOptions& opt = {});

struct SpectralSample {
    double E = 0.0;
    EpsSchedule schedule;
    Eigen::MatrixXd p;                      // symmetrized, PSD-projected estimate
    Eigen::VectorXd singular_values;
    int rank = 0;                           // 0 whenever the sample is non-singular
    bool converged = false;
    bool singular = false;
    double eps_min = 0.0;
    int steps = 0;                          // schedule steps with a valid resolvent
    std::vector<Eigen::MatrixXcd> history;  // raw ratio matrices per step
};

SpectralSample p_matrix(const BorelSource& src, int dim, double E, const EpsSchedule& sched,
                        double rank_tol = 1e-3);
SpectralSample p_matrix(const StarLikeGraph& g, double E, const EpsSchedule& sched,
                        double rank_tol = 1e-3, const ResolventOptions& opt = {});

struct MultiplicityProfile {
    std::vector<SpectralSample> samples;
    std::map<int, long> histogram;  // rank -> count over converged singular samples
    int modal_rank = -1;            // -1 when no sample is converged and singular
    int max_rank = 0;
    long singular_count = 0;
};

MultiplicityProfile multiplicity_profile(const StarLikeGraph& g, const std::vector<double>& grid,
                                         const EpsSchedule& sched, double rank_tol = 1e-3,
                                         const ResolventOptions& opt = {}, int threads = 1);

struct GeneralizedEigenfunction {
    FinVector<double> values;
    std::map<VertexId, double> residual;  // eigenvalue-equation residual, interior vertices
    SpectralSample sample;
};

GeneralizedEigenfunction generalized_eigenfunction(const StarLikeGraph& g, double E, VertexId v,
                                                   const EpsSchedule& sched, int horizon,
                                                   double rank_tol = 1e-3,
                                                   const ResolventOptions& opt = {});

struct BranchScalars {
    std::vector<double> lambda;    // one scalar per branch
    std::vector<double> residual;  // relative least-squares misfit per branch
};

// Fit gef restricted to each branch against the subordinate-direction
// solution normalized by the boundary condition at scale L.
BranchScalars branch_scalars(const StarLikeGraph& g, const FinVector<double>& gef, double E,
                             double L);

// Nullity of the finite subordinate-solution system: values on K plus one
// scalar per branch, branch tails pinned to the subordinate direction at
// scale L; equations at every compact vertex and branch depths 1, 2.
int subordinate_space_dim(const StarLikeGraph& g, double E, double L, double tol = 1e-6);

// Triangular branch reconstruction from vanishing moments at v0 on a
// single-branch graph: value at depth n comes from the moment of order
// dist(v0, phi(1)) + n - 1.
std::vector<double> reconstruct_branch(const StarLikeGraph& g,
                                       const std::vector<double>& psi_on_K, VertexId v0,
                                       int n_target);

// (1/pi) Im trace M(E + i eps) on the grid; NaN marks grid points where the
// resolvent did not converge.
std::vector<double> stieltjes_density(const StarLikeGraph& g, const std::vector<double>& grid,
                                      double eps, const ResolventOptions& opt = {},
                                      int threads = 1);

namespace detail {
void parallel_for(long n, int threads, const std::function<void(long)>& fn);
bool ratio_consistent(const std::vector<std::complex<double>>& history);
bool trace_singular(const std::vector<double>& im_trace);
}  // namespace detail

}  // namespace starlike
