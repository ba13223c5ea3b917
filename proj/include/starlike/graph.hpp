// graph.hpp - star-like graphs: a finite compact component with half-line branches.
#pragma once

#include <compare>
#include <functional>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace starlike {

// Vertex of a star-like graph.  branch == 0 marks a compact vertex with
// compact index `index`; branch >= 1 marks the site at depth `index` >= 1 on
// that branch.  The default ordering (compact vertices first by index, then
// branch vertices by (branch, depth)) is the canonical encoding used for
// neighbor lists, path enumeration and truncation indexing.
struct VertexId {
    int branch = 0;
    int index = 0;

    static VertexId compact(int i) { return {0, i}; }
    static VertexId branch_site(int branch, int depth) { return {branch, depth}; }

    bool is_compact() const { return branch == 0; }
    int depth() const { return branch == 0 ? 0 : index; }

    auto operator<=>(const VertexId&) const = default;
};

// Coefficient rules along one branch.  a(n) is the weight of the edge between
// sites n-1 and n (site 0 being the attachment vertex, or the fictitious site
// of a pure half-line), b(n) the potential at site n; both defined for n >= 1.
// Rules must be pure: repeated queries at the same n return identical values.
// Every query is checked against the declared bound.
class BranchCoefficients {
public:
    BranchCoefficients(std::function<double(int)> a, std::function<double(int)> b, double bound);

    double a(int n) const;
    double b(int n) const;
    double bound() const { return bound_; }

private:
    std::function<double(int)> a_fn_;
    std::function<double(int)> b_fn_;
    double bound_ = 0.0;
};

// The finite part of a star-like graph.  Edges are undirected and listed once;
// attachments[i-1] is the compact index of phi_i(0), the root of branch i.
struct CompactComponent {
    int size = 0;
    std::vector<std::tuple<int, int, double>> edges;
    std::vector<double> potential;
    std::vector<int> attachments;
};

class StarLikeGraph {
public:
    StarLikeGraph(CompactComponent compact, std::vector<BranchCoefficients> branches);

    int compact_size() const { return compact_.size; }
    int branch_count() const { return static_cast<int>(branches_.size()); }
    const CompactComponent& compact() const { return compact_; }
    const BranchCoefficients& branch(int i) const;
    int attachment(int i) const;
    // Branch rooted at compact vertex c, or 0 when none.
    int branch_at(int c) const;
    double potential(VertexId v) const;
    double coefficient_bound() const;
    // f(v) = dist(v, K) + 1.
    int f(VertexId v) const { return v.depth() + 1; }
    int compact_distance(int u, int v) const;
    const std::vector<std::pair<int, double>>& compact_neighbors(int c) const;

private:
    CompactComponent compact_;
    std::vector<BranchCoefficients> branches_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
    std::vector<int> branch_at_;
    Eigen::MatrixXi kdist_;
};

StarLikeGraph build_star_like(CompactComponent compact, std::vector<BranchCoefficients> branches);

// Neighbors with edge weights, sorted in encoding order.
std::vector<std::pair<VertexId, double>> neighbors(const StarLikeGraph& g, VertexId v);

int distance(const StarLikeGraph& g, VertexId u, VertexId v);

long ball_size(const StarLikeGraph& g, VertexId v, int radius);
std::vector<VertexId> ball(const StarLikeGraph& g, VertexId v, int radius, long cap = 10000);

struct PathCaps {
    int max_length = 12;
    long max_ball = 10000;
};

// All vertex sequences (x_0 = v, ..., x_n = w) with consecutive vertices
// adjacent, in lexicographic order of the encoding.  Revisits are allowed.
std::vector<std::vector<VertexId>> enumerate_paths(const StarLikeGraph& g, VertexId v, VertexId w,
                                                   int n, const PathCaps& caps = {});

// Path-weight sum beta_{v,w,n} = sum over length-n paths of prod a_{x_i,x_{i+1}},
// defined for w on the boundary sphere dist(v, w) = n.
double beta_coefficient(const StarLikeGraph& g, VertexId v, VertexId w, int n,
                        const PathCaps& caps = {});

// Spherically homogeneous tree with eventually-1 branching, realized as a
// star-like graph: compact component B_N around the root, one branch per
// vertex of the last branching sphere.  level.a(n) weights the edges between
// spheres n-1 and n, level.b(n) is the potential on sphere n.
StarLikeGraph build_sht(const std::vector<int>& branching, const BranchCoefficients& level,
                        double root_potential = 0.0);

struct TreeDimension {
    double value = 0.0;                // log|B_n|/log n at n = n_max
    std::vector<double> partial;       // partial[j] = log|B_{j+2}|/log(j+2)
};

TreeDimension tree_dimension(const std::vector<int>& branching, long n_max);

// |B_n| of the tree around the root; +inf once past double range.
double sht_ball_size(const std::vector<int>& branching, long n);

}  // namespace starlike
