// sharpness.hpp - the rotation-symmetric star: m identical rays glued at one
// root.  Its sector decomposition splits the operator into m - 1 copies of a
// Dirichlet half-line block plus one symmetric chain, which is what makes the
// multiplicity bound tight.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "starlike/graph.hpp"
#include "starlike/jacobi.hpp"

namespace starlike {

// Rays are indexed 1..m; site j >= 1 on ray i is v_j^i, with v_1^i living in
// the compact component next to the origin.  Edge weights are all 1, the root
// potential is 0, and the ray potential V0(j) = v0_rule.b(j) is ray
// independent.
struct SharpnessModel {
    int m = 0;
    BranchCoefficients v0_rule;
    StarLikeGraph graph;
};

// v0_rule must have unit hopping; only its potential is used.
SharpnessModel make_sharpness_model(int m, BranchCoefficients v0_rule);

VertexId model_origin();
VertexId model_site(const SharpnessModel& model, int ray, int j);

// Projection onto sector k (0 <= k < m): averages ray values against powers
// of the m-th root of unity; the origin survives only in sector 0.
FinVector<std::complex<double>> sector_project(const SharpnessModel& model,
                                               const FinVector<std::complex<double>>& psi,
                                               int k);

// ||J(Pi_k psi) - Pi_k(J psi)|| / ||psi||; zero up to roundoff for every psi.
double check_invariance(const SharpnessModel& model,
                        const FinVector<std::complex<double>>& psi, int k);

// Unitary identification of sector k with a half-line vector: entry 0 is the
// origin value, entry j is sqrt(m) psi(v_j^1).  Requires psi to lie in sector
// k up to a relative 1e-10.  For k != 0 the image satisfies the Dirichlet
// half-line equation with potential V0; for k = 0 the chain gains the origin
// site with first hopping sqrt(m).
std::vector<std::complex<double>> intertwine(const SharpnessModel& model,
                                             const FinVector<std::complex<double>>& psi, int k);

// The half-line block acting on sectors k != 0: unit weights, potential V0.
BranchCoefficients dirichlet_block(const SharpnessModel& model);
// Its truncation to the first `sites` sites.
Eigen::MatrixXd dirichlet_matrix(const SharpnessModel& model, int sites);
// The sector-0 block: origin plus `sites` chain sites, first hopping sqrt(m).
Eigen::MatrixXd symmetric_block(const SharpnessModel& model, int sites);

struct DegeneracyCluster {
    double energy = 0.0;
    int size = 0;
    int dirichlet_index = -1;  // matching half-line level, or -1
    double dirichlet_gap = 0.0;
    double neighbor_gap = 0.0;  // distance to the nearest other cluster
};

struct DegeneracyReport {
    std::vector<DegeneracyCluster> clusters;
    std::vector<double> dirichlet;  // half-line block spectrum at the same truncation
    long degenerate_count = 0;      // clusters of size m - 1 matching a half-line level
};

// Spectrum of the star truncated to j <= sites on every ray, clustered with
// cluster_tol and matched against the truncated half-line block within
// match_tol.
DegeneracyReport degeneracy_experiment(const SharpnessModel& model, int sites,
                                       double cluster_tol, double match_tol = 1e-9);

}  // namespace starlike
