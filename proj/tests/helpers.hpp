// Shared fixtures for the test binaries: canonical small graphs plus a
// reproducible random-graph generator used by property tests.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "starlike/graph.hpp"
#include "starlike/jacobi.hpp"

namespace testutil {

using namespace starlike;

// K = {o} with potential b_root and a single branch.
StarLikeGraph rooted_halfline(const BranchCoefficients& c, double b_root = 0.0);

inline StarLikeGraph free_halfline_graph() { return rooted_halfline(free_potential()); }

// Hub o = 0 joined to m attachment vertices 1..m by unit edges, zero
// potential everywhere, one free branch per attachment.
StarLikeGraph free_star(int m);

// K = {o}, b_o = 3, free branch: one bound state at E = 10/3 with
// eigenvector psi(o) = 1, psi(branch site n) = 3^{-n}.
inline StarLikeGraph bound_state_graph() { return rooted_halfline(free_potential(), 3.0); }

// Compact path 0-1-...-k with the given edge weights and one free branch at
// vertex 0; potentials zero.
StarLikeGraph compact_path_graph(const std::vector<double>& weights);

// 4-cycle 0-1-2-3-0 with edge weights a1..a4 in that order, free branch at 0.
StarLikeGraph four_cycle_graph(double a1, double a2, double a3, double a4);

// iid coefficients with a(n) in [a_lo, a_hi], b(n) in [b_lo, b_hi], drawn from
// the library's counter RNG so values are pure in n.
BranchCoefficients random_iid_coefficients(double a_lo, double a_hi, double b_lo, double b_hi,
                                           std::uint64_t seed, std::uint64_t stream);

struct RandomGraphSpec {
    int max_compact = 8;
    int max_branches = 3;
    double a_lo = 0.7, a_hi = 1.3;
    double b_lo = -1.0, b_hi = 1.0;
    int extra_edges = 2;
    bool unit_branch_weights = false;  // restrict rules to a == 1 families
};

// Connected compact component (spanning path + a few extra edges), random
// distinct attachments, branch rules drawn from the factory mix.
StarLikeGraph random_graph(std::mt19937_64& rng, const RandomGraphSpec& spec = {});

}  // namespace testutil
