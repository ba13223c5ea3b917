#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "starlike/jacobi.hpp"

using namespace starlike;
using testutil::free_halfline_graph;
using testutil::free_star;

namespace {

FinVector<double> random_vector(std::mt19937_64& rng, const StarLikeGraph& g, int radius = 4) {
    const auto verts = ball(g, VertexId::compact(0), radius);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    FinVector<double> psi;
    for (const auto& v : verts)
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) psi[v] = coef(rng);
    if (psi.empty()) psi[VertexId::compact(0)] = 1.0;
    return psi;
}

double max_degree_bound(const StarLikeGraph& g) {
    int deg = 2;  // branch interior
    for (int c = 0; c < g.compact_size(); ++c) {
        int d = static_cast<int>(g.compact_neighbors(c).size()) + (g.branch_at(c) ? 1 : 0);
        deg = std::max(deg, d);
    }
    return (1.0 + deg) * g.coefficient_bound();
}

}  // namespace

TEST_CASE("operator action on basis vectors") {
    const auto star = free_star(3);
    FinVector<double> delta{{VertexId::compact(0), 1.0}};
    const auto out = act(star, delta);
    REQUIRE(out.size() == 3);
    for (int i = 1; i <= 3; ++i) CHECK(out.at(VertexId::compact(i)) == 1.0);
    CHECK(out.count(VertexId::compact(0)) == 0);  // zero potential entry pruned

    const auto line = free_halfline_graph();
    FinVector<double> deep{{VertexId::branch_site(1, 2), 1.0}};
    const auto spread = act(line, deep);
    REQUIRE(spread.size() == 2);
    CHECK(spread.at(VertexId::branch_site(1, 1)) == 1.0);
    CHECK(spread.at(VertexId::branch_site(1, 3)) == 1.0);
}

TEST_CASE("operator action with weights and potential") {
    CompactComponent k;
    k.size = 2;
    k.potential = {7.0, 0.0};
    k.edges = {{0, 1, 2.0}};
    k.attachments = {1};
    const auto g = build_star_like(std::move(k), {free_potential()});
    const auto out = act(g, FinVector<double>{{VertexId::compact(0), 1.0}});
    REQUIRE(out.size() == 2);
    CHECK(out.at(VertexId::compact(0)) == 7.0);
    CHECK(out.at(VertexId::compact(1)) == 2.0);
}

TEST_CASE("action is symmetric and bounded") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 20; ++t) {
        const auto g = testutil::random_graph(rng);
        const auto psi = random_vector(rng, g);
        const auto phi = random_vector(rng, g);
        const auto jpsi = act(g, psi);
        const auto jphi = act(g, phi);
        const double scale = norm(psi) * norm(phi);
        CHECK(std::abs(dot(jpsi, phi) - dot(psi, jphi)) <= 1e-13 * std::max(1.0, scale));
        CHECK(norm(jpsi) <= max_degree_bound(g) * norm(psi) * (1.0 + 1e-13));
    }
}

TEST_CASE("moments") {
    const auto line = free_halfline_graph();
    const auto o = VertexId::compact(0);
    CHECK(moment(line, o, o, 0) == 1.0);
    CHECK(moment(line, o, VertexId::branch_site(1, 1), 0) == 0.0);
    CHECK(moment(line, o, VertexId::branch_site(1, 4), 4) == doctest::Approx(1.0));
    CHECK(moment(line, o, VertexId::branch_site(1, 4), 3) == 0.0);

    const auto cyc = testutil::four_cycle_graph(0.5, 1.5, 2.0, 2.5);
    CHECK(moment(cyc, VertexId::compact(0), VertexId::compact(2), 2) ==
          doctest::Approx(0.5 * 1.5 + 2.5 * 2.0).epsilon(1e-14));

    // moment and path-weight coefficient agree on the boundary sphere
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        const auto g = testutil::random_graph(rng);
        const auto verts = ball(g, VertexId::compact(0), 3);
        const auto v = verts[std::uniform_int_distribution<std::size_t>(0, verts.size() - 1)(rng)];
        for (const auto& w : verts) {
            const int n = distance(g, v, w);
            if (n == 0 || n > 6) continue;
            const double mo = moment(g, v, w, n);
            const double be = beta_coefficient(g, v, w, n);
            CHECK(std::abs(mo - be) <= 1e-12 * std::max(1.0, std::abs(be)));
        }
    }
}

TEST_CASE("truncated matrices") {
    const auto line = free_halfline_graph();
    const auto t1 = assemble_truncated(line, {3});
    REQUIRE(t1.dim() == 4);
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i + 1 < 4; ++i) expect(i, i + 1) = expect(i + 1, i) = 1.0;
    CHECK((t1.dense() - expect).cwiseAbs().maxCoeff() == 0.0);

    const auto star = free_star(2);
    const auto t2 = assemble_truncated(star, {1});
    REQUIRE(t2.dim() == 5);
    const auto d = t2.dense();
    CHECK(d(0, 1) == 1.0);
    CHECK(d(0, 2) == 1.0);
    CHECK(d(1, 3) == 1.0);  // first branch head
    CHECK(d(2, 4) == 1.0);  // second branch head
    CHECK(d(1, 2) == 0.0);
    CHECK(d.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("truncation matches the operator action on interior columns") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 8; ++t) {
        const auto g = testutil::random_graph(rng);
        const int N = 5;
        const auto tr = assemble_truncated(g, {N});
        const auto dense = tr.dense();
        for (const auto& v : truncation_vertices(g, N)) {
            if (v.depth() >= N) continue;  // depth-N columns lose their outward edge
            const auto col = act(g, FinVector<double>{{v, 1.0}});
            Eigen::VectorXd expect = Eigen::VectorXd::Zero(tr.dim());
            for (const auto& [w, x] : col) expect(truncation_index(g, N, w)) = x;
            CHECK((dense.col(truncation_index(g, N, v)) - expect).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("truncation memory guard") {
    CHECK_THROWS_AS(assemble_truncated(free_halfline_graph(), {2'000'100}),
                    std::invalid_argument);
}

TEST_CASE("coordinate text output") {
    const auto t = assemble_truncated(free_halfline_graph(), {2});
    std::ostringstream os;
    write_coordinate(t, os);
    CHECK(os.str() == "3 4\n0 1 1\n1 0 1\n1 2 1\n2 1 1\n");
}

TEST_CASE("potential rules") {
    const auto free_rule = free_potential();
    CHECK(free_rule.a(17) == 1.0);
    CHECK(free_rule.b(17) == 0.0);

    const auto per = periodic_potential({0.0, 1.0});
    CHECK(per.b(1) == 0.0);
    CHECK(per.b(2) == 1.0);
    CHECK(per.b(3) == 0.0);
    CHECK(per.b(8) == 1.0);
    CHECK_THROWS_AS(periodic_potential({}), std::invalid_argument);

    const auto sparse = sparse_power_potential(1.0, 0.5, 2);
    CHECK(sparse.b(2) == doctest::Approx(1.0));
    CHECK(sparse.b(4) == doctest::Approx(std::sqrt(2.0)));
    CHECK(sparse.b(8) == doctest::Approx(std::sqrt(3.0)));
    CHECK(sparse.b(3) == 0.0);
    CHECK(sparse.b(6) == 0.0);
    CHECK(sparse.b(1) == 0.0);
    CHECK_THROWS_AS(sparse_power_potential(1.0, 0.5, 1), std::invalid_argument);

    const auto iid1 = iid_uniform_potential(-1.0, 1.0, 42, 0);
    const auto iid2 = iid_uniform_potential(-1.0, 1.0, 42, 0);
    const auto iid3 = iid_uniform_potential(-1.0, 1.0, 42, 1);
    bool streams_differ = false;
    for (int n = 1; n <= 100; ++n) {
        CHECK(iid1.b(n) == iid2.b(n));
        CHECK(std::abs(iid1.b(n)) <= 1.0);
        if (iid1.b(n) != iid3.b(n)) streams_differ = true;
    }
    CHECK(streams_differ);
    CHECK(iid1.b(7) == iid1.b(7));  // pure in n
}

TEST_CASE("counter RNG basics") {
    CHECK(counter_uniform(1, 2, 3) == counter_uniform(1, 2, 3));
    CHECK(counter_uniform(1, 2, 3) != counter_uniform(1, 2, 4));
    CHECK(counter_uniform(1, 2, 3) != counter_uniform(1, 3, 3));
    for (std::uint64_t n = 0; n < 1000; ++n) {
        const double x = counter_uniform(9, 9, n);
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("pasted half-lines") {
    std::vector<BranchCoefficients> factors{free_potential(), free_potential()};
    Eigen::MatrixXd a12(2, 2);
    a12 << 0, 1, 1, 0;
    const auto g = paste_halflines(factors, a12);
    CHECK(g.compact_size() == 2);
    CHECK(g.branch_count() == 2);
    CHECK(moment(g, VertexId::compact(0), VertexId::compact(1), 1) == 1.0);

    Eigen::MatrixXd weighted(2, 2);
    weighted << 0, 0.25, 0.25, 0;
    const auto gw = paste_halflines(factors, weighted);
    CHECK(moment(gw, VertexId::compact(0), VertexId::compact(1), 1) == 0.25);

    Eigen::MatrixXd tri = Eigen::MatrixXd::Ones(3, 3);
    tri.diagonal().setZero();
    std::vector<BranchCoefficients> three(3, free_potential());
    const auto gt = paste_halflines(three, tri);
    CHECK(gt.compact_size() == 3);
    CHECK(neighbors(gt, VertexId::compact(0)).size() == 3);  // two coupled roots + branch

    Eigen::MatrixXd diag = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(paste_halflines(factors, diag), std::invalid_argument);
    Eigen::MatrixXd asym(2, 2);
    asym << 0, 1, 2, 0;
    CHECK_THROWS_AS(paste_halflines(factors, asym), std::invalid_argument);
    Eigen::MatrixXd neg(2, 2);
    neg << 0, -1, -1, 0;
    CHECK_THROWS_AS(paste_halflines(factors, neg), std::invalid_argument);
}

TEST_CASE("pasting equals the coupled direct-sum action") {
    const auto f0 = periodic_potential({0.3, -0.4});
    const auto f1 = iid_uniform_potential(-0.5, 0.5, 7, 0);
    Eigen::MatrixXd a(2, 2);
    a << 0, 0.8, 0.8, 0;
    const auto g = paste_halflines({f0, f1}, a);

    // factor vectors psi_i over sites 1..len
    const int len = 6;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<Eigen::VectorXd> psi(2, Eigen::VectorXd::Zero(len + 3));
    for (int i = 0; i < 2; ++i)
        for (int n = 1; n <= len; ++n) psi[i](n) = coef(rng);

    // direct formula: (T psi)_i = J_i psi_i + (A v)_i delta_1, v_i = psi_i(1)
    const BranchCoefficients* fac[2] = {&f0, &f1};
    std::vector<Eigen::VectorXd> expect(2, Eigen::VectorXd::Zero(len + 2));
    Eigen::Vector2d heads(psi[0](1), psi[1](1));
    const Eigen::Vector2d coupled = a * heads;
    for (int i = 0; i < 2; ++i) {
        for (int n = 1; n <= len + 1; ++n) {
            double s = fac[i]->b(n) * psi[i](n) + fac[i]->a(n + 1) * psi[i](n + 1);
            if (n >= 2) s += fac[i]->a(n) * psi[i](n - 1);
            expect[i](n) = s;
        }
        expect[i](1) += coupled(i);
    }

    // graph side: compact i = factor site 1, branch i+1 depth d = site d+1
    FinVector<double> vec;
    for (int i = 0; i < 2; ++i)
        for (int n = 1; n <= len; ++n)
            vec[n == 1 ? VertexId::compact(i) : VertexId::branch_site(i + 1, n - 1)] = psi[i](n);
    const auto out = act(g, vec);
    for (int i = 0; i < 2; ++i)
        for (int n = 1; n <= len + 1; ++n) {
            const auto v = n == 1 ? VertexId::compact(i) : VertexId::branch_site(i + 1, n - 1);
            const double got = out.count(v) ? out.at(v) : 0.0;
            CHECK(got == doctest::Approx(expect[i](n)).epsilon(1e-15));
        }
}
