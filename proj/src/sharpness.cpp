#include "starlike/sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace starlike {

namespace {

using complexd = std::complex<double>;

}  // namespace

SharpnessModel make_sharpness_model(int m, BranchCoefficients v0_rule) {
    if (m < 2) throw std::invalid_argument("model needs at least two rays");
    if (v0_rule.a(1) != 1.0 || v0_rule.a(2) != 1.0)
        throw std::invalid_argument("potential rule must have unit hopping");

    CompactComponent k;
    k.size = m + 1;
    k.potential.assign(m + 1, 0.0);
    for (int i = 1; i <= m; ++i) {
        k.edges.emplace_back(0, i, 1.0);
        k.potential[i] = v0_rule.b(1);
        k.attachments.push_back(i);
    }
    std::vector<BranchCoefficients> branches;
    branches.reserve(m);
    for (int i = 0; i < m; ++i)
        branches.emplace_back([](int) { return 1.0; },
                              [v0_rule](int n) { return v0_rule.b(n + 1); },
                              v0_rule.bound());
    StarLikeGraph graph = build_star_like(std::move(k), std::move(branches));
    return SharpnessModel{m, std::move(v0_rule), std::move(graph)};
}

VertexId model_origin() { return VertexId::compact(0); }

VertexId model_site(const SharpnessModel& model, int ray, int j) {
    if (ray < 1 || ray > model.m) throw std::invalid_argument("ray index out of range");
    if (j < 1) throw std::invalid_argument("ray site index starts at 1");
    return j == 1 ? VertexId::compact(ray) : VertexId::branch_site(ray, j - 1);
}

namespace {

// (ray, j) coordinates of a model vertex; ray 0 marks the origin.
std::pair<int, int> ray_site(const SharpnessModel& model, VertexId v) {
    if (v == model_origin()) return {0, 0};
    if (v.is_compact()) {
        if (v.index < 1 || v.index > model.m)
            throw std::invalid_argument("vertex outside the model");
        return {v.index, 1};
    }
    if (v.branch < 1 || v.branch > model.m || v.index < 1)
        throw std::invalid_argument("vertex outside the model");
    return {v.branch, v.index + 1};
}

}  // namespace

FinVector<complexd> sector_project(const SharpnessModel& model, const FinVector<complexd>& psi,
                                   int k) {
    const int m = model.m;
    if (k < 0 || k >= m) throw std::invalid_argument("sector index out of range");

    complexd at_origin = 0.0;
    std::map<int, Eigen::VectorXcd> rows;  // j -> ray values
    for (const auto& [v, x] : psi) {
        const auto [ray, j] = ray_site(model, v);
        if (ray == 0) {
            at_origin = x;
            continue;
        }
        auto [it, fresh] = rows.try_emplace(j, Eigen::VectorXcd::Zero(m));
        it->second(ray - 1) = x;
    }

    std::vector<complexd> zeta_pow(m);
    for (int r = 0; r < m; ++r)
        zeta_pow[r] = std::polar(1.0, 2.0 * std::numbers::pi * r / m);

    FinVector<complexd> out;
    if (k == 0 && at_origin != 0.0) out[model_origin()] = at_origin;
    for (const auto& [j, vals] : rows) {
        for (int i = 1; i <= m; ++i) {
            complexd acc = 0.0;
            for (int l = 1; l <= m; ++l) {
                const int r = (((i - l) * k) % m + m) % m;
                acc += zeta_pow[r] * vals(l - 1);
            }
            acc /= static_cast<double>(m);
            if (acc != 0.0) out[model_site(model, i, j)] = acc;
        }
    }
    return out;
}

double check_invariance(const SharpnessModel& model, const FinVector<complexd>& psi, int k) {
    FinVector<complexd> diff = act(model.graph, sector_project(model, psi, k));
    for (const auto& [v, x] : sector_project(model, act(model.graph, psi), k)) diff[v] -= x;
    const double scale = norm(psi);
    return scale > 0.0 ? norm(diff) / scale : norm(diff);
}

std::vector<complexd> intertwine(const SharpnessModel& model, const FinVector<complexd>& psi,
                                 int k) {
    const FinVector<complexd> pr = sector_project(model, psi, k);
    FinVector<complexd> diff = pr;
    for (const auto& [v, x] : psi) diff[v] -= x;
    if (norm(diff) > 1e-10 * std::max(1.0, norm(psi)))
        throw std::invalid_argument("vector does not lie in the sector");

    int jmax = 0;
    for (const auto& [v, x] : pr) jmax = std::max(jmax, ray_site(model, v).second);
    std::vector<complexd> out(jmax + 1, complexd(0.0));
    if (k == 0) {
        const auto o = pr.find(model_origin());
        if (o != pr.end()) out[0] = o->second;
    }
    const double root = std::sqrt(static_cast<double>(model.m));
    for (int j = 1; j <= jmax; ++j) {
        const auto it = pr.find(model_site(model, 1, j));
        if (it != pr.end()) out[j] = root * it->second;
    }
    return out;
}

BranchCoefficients dirichlet_block(const SharpnessModel& model) { return model.v0_rule; }

Eigen::MatrixXd dirichlet_matrix(const SharpnessModel& model, int sites) {
    if (sites < 1) throw std::invalid_argument("need at least one site");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(sites, sites);
    for (int j = 0; j < sites; ++j) {
        a(j, j) = model.v0_rule.b(j + 1);
        if (j + 1 < sites) {
            a(j, j + 1) = 1.0;
            a(j + 1, j) = 1.0;
        }
    }
    return a;
}

Eigen::MatrixXd symmetric_block(const SharpnessModel& model, int sites) {
    if (sites < 1) throw std::invalid_argument("need at least one site");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(sites + 1, sites + 1);
    const double root = std::sqrt(static_cast<double>(model.m));
    a(0, 1) = root;
    a(1, 0) = root;
    for (int j = 1; j <= sites; ++j) {
        a(j, j) = model.v0_rule.b(j);
        if (j < sites) {
            a(j, j + 1) = 1.0;
            a(j + 1, j) = 1.0;
        }
    }
    return a;
}

DegeneracyReport degeneracy_experiment(const SharpnessModel& model, int sites,
                                       double cluster_tol, double match_tol) {
    if (sites < 2) throw std::invalid_argument("need at least two sites per ray");
    if (!(cluster_tol > 0.0) || !(match_tol > 0.0))
        throw std::invalid_argument("tolerances must be positive");

    const Eigen::MatrixXd full = assemble_truncated(model.graph, {sites - 1}).dense();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ds(dirichlet_matrix(model, sites),
                                                            Eigen::EigenvaluesOnly);

    DegeneracyReport rep;
    rep.dirichlet.assign(ds.eigenvalues().data(), ds.eigenvalues().data() + sites);

    int start = 0;
    for (Eigen::Index i = 1; i <= ev.size(); ++i) {
        if (i < ev.size() && ev(i) - ev(i - 1) <= cluster_tol) continue;
        DegeneracyCluster c;
        c.size = static_cast<int>(i - start);
        c.energy = ev.segment(start, c.size).mean();
        c.dirichlet_gap = std::numeric_limits<double>::infinity();
        const auto lo = std::lower_bound(rep.dirichlet.begin(), rep.dirichlet.end(), c.energy);
        int best = -1;
        if (lo != rep.dirichlet.end()) {
            best = static_cast<int>(lo - rep.dirichlet.begin());
            c.dirichlet_gap = std::abs(*lo - c.energy);
        }
        if (lo != rep.dirichlet.begin()) {
            const double g = std::abs(*(lo - 1) - c.energy);
            if (g < c.dirichlet_gap) {
                c.dirichlet_gap = g;
                best = static_cast<int>(lo - 1 - rep.dirichlet.begin());
            }
        }
        if (c.dirichlet_gap <= match_tol) c.dirichlet_index = best;
        if (c.size == model.m - 1 && c.dirichlet_index >= 0) ++rep.degenerate_count;
        rep.clusters.push_back(c);
        start = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < rep.clusters.size(); ++i) {
        double gap = std::numeric_limits<double>::infinity();
        if (i > 0) gap = rep.clusters[i].energy - rep.clusters[i - 1].energy;
        if (i + 1 < rep.clusters.size())
            gap = std::min(gap, rep.clusters[i + 1].energy - rep.clusters[i].energy);
        rep.clusters[i].neighbor_gap = gap;
    }
    return rep;
}

}  // namespace starlike
