#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "starlike/graph.hpp"

using namespace starlike;
using testutil::compact_path_graph;
using testutil::four_cycle_graph;
using testutil::free_halfline_graph;
using testutil::free_star;

TEST_CASE("vertex encoding and f") {
    const auto o = VertexId::compact(0);
    CHECK(o.is_compact());
    CHECK(o.depth() == 0);
    const auto s = VertexId::branch_site(2, 5);
    CHECK_FALSE(s.is_compact());
    CHECK(s.depth() == 5);
    CHECK(VertexId::compact(1) < VertexId::branch_site(1, 1));
    CHECK(VertexId::branch_site(1, 9) < VertexId::branch_site(2, 1));

    const auto g = free_star(3);
    CHECK(g.f(o) == 1);
    CHECK(g.f(VertexId::branch_site(1, 4)) == 5);
}

TEST_CASE("branch coefficient rules are validated") {
    CHECK_THROWS_AS(BranchCoefficients([](int) { return 1.0; }, [](int) { return 0.0; },
                                       std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    BranchCoefficients bad([](int) { return -1.0; }, [](int) { return 0.0; }, 1.0);
    CHECK_THROWS_AS(bad.a(1), std::invalid_argument);
    BranchCoefficients over([](int) { return 1.0; }, [](int n) { return double(n); }, 2.0);
    CHECK(over.b(2) == 2.0);
    CHECK_THROWS_AS(over.b(3), std::invalid_argument);
}

TEST_CASE("construction rejects malformed compact data") {
    CompactComponent k;
    k.size = 2;
    k.potential = {0.0, 0.0};
    k.edges = {{0, 1, 1.0}};
    k.attachments = {0, 0};  // duplicate attachment
    std::vector<BranchCoefficients> br(2, free_potential());
    CHECK_THROWS_AS(build_star_like(std::move(k), std::move(br)), std::invalid_argument);

    CompactComponent k2;
    k2.size = 2;
    k2.potential = {0.0, 0.0};
    k2.edges = {{0, 1, -2.0}};
    k2.attachments = {0};
    CHECK_THROWS_AS(build_star_like(std::move(k2), {free_potential()}), std::invalid_argument);
}

TEST_CASE("neighbors on the free half-line") {
    const auto g = free_halfline_graph();
    const auto deep = neighbors(g, VertexId::branch_site(1, 5));
    REQUIRE(deep.size() == 2);
    CHECK(deep[0].first == VertexId::branch_site(1, 4));
    CHECK(deep[0].second == 1.0);
    CHECK(deep[1].first == VertexId::branch_site(1, 6));
    CHECK(deep[1].second == 1.0);

    const auto head = neighbors(g, VertexId::branch_site(1, 1));
    REQUIRE(head.size() == 2);
    CHECK(head[0].first == VertexId::compact(0));
    CHECK(head[1].first == VertexId::branch_site(1, 2));
}

TEST_CASE("neighbors at a star hub") {
    const auto g = free_star(3);
    const auto nb = neighbors(g, VertexId::compact(0));
    REQUIRE(nb.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(nb[i].first == VertexId::compact(i + 1));
        CHECK(nb[i].second == 1.0);
    }
    const auto att = neighbors(g, VertexId::compact(1));
    REQUIRE(att.size() == 2);
    CHECK(att[0].first == VertexId::compact(0));
    CHECK(att[1].first == VertexId::branch_site(1, 1));
}

TEST_CASE("adjacency is symmetric with matching weights") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 10; ++t) {
        const auto g = testutil::random_graph(rng);
        for (const auto& v : ball(g, VertexId::compact(0), 4)) {
            for (const auto& [w, a] : neighbors(g, v)) {
                bool found = false;
                for (const auto& [u, a2] : neighbors(g, w))
                    if (u == v) {
                        found = true;
                        CHECK(a2 == a);
                    }
                CHECK(found);
            }
        }
    }
}

TEST_CASE("graph distance") {
    const auto line = free_halfline_graph();
    CHECK(distance(line, VertexId::branch_site(1, 3), VertexId::branch_site(1, 7)) == 4);
    CHECK(distance(line, VertexId::compact(0), VertexId::compact(0)) == 0);

    const auto star = free_star(2);
    CHECK(distance(star, VertexId::branch_site(1, 1), VertexId::branch_site(2, 1)) == 4);
    CHECK(distance(star, VertexId::branch_site(1, 2), VertexId::compact(0)) == 3);

    // triangle inequality on random graphs
    std::mt19937_64 rng(11);
    for (int t = 0; t < 5; ++t) {
        const auto g = testutil::random_graph(rng);
        const auto verts = ball(g, VertexId::compact(0), 3);
        for (std::size_t i = 0; i < verts.size(); i += 3)
            for (std::size_t j = 0; j < verts.size(); j += 4)
                for (std::size_t k = 0; k < verts.size(); k += 5) {
                    const int dij = distance(g, verts[i], verts[j]);
                    CHECK(dij == distance(g, verts[j], verts[i]));
                    CHECK(dij <= distance(g, verts[i], verts[k]) + distance(g, verts[k], verts[j]));
                }
    }
}

TEST_CASE("balls and ball sizes agree") {
    const auto g = free_star(3);
    for (int r = 0; r <= 5; ++r) {
        const auto b = ball(g, VertexId::compact(0), r);
        CHECK(static_cast<long>(b.size()) == ball_size(g, VertexId::compact(0), r));
        std::set<VertexId> uniq(b.begin(), b.end());
        CHECK(uniq.size() == b.size());
        for (const auto& v : b) CHECK(distance(g, VertexId::compact(0), v) <= r);
    }
    // star: |B_r(o)| = 1 + 3r
    CHECK(ball_size(g, VertexId::compact(0), 4) == 13);
    CHECK_THROWS_AS(ball(g, VertexId::compact(0), 40000, 100), std::invalid_argument);
}

TEST_CASE("path enumeration") {
    const auto line = free_halfline_graph();
    const auto v = VertexId::compact(0);
    const auto w = VertexId::branch_site(1, 5);
    const auto paths = enumerate_paths(line, v, w, 5);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].size() == 6);
    CHECK(paths[0].front() == v);
    CHECK(paths[0].back() == w);

    const auto cyc = four_cycle_graph(1, 1, 1, 1);
    CHECK(enumerate_paths(cyc, VertexId::compact(0), VertexId::compact(2), 2).size() == 2);

    // too far: no paths at all
    CHECK(enumerate_paths(line, v, VertexId::branch_site(1, 4), 3).empty());

    PathCaps caps;
    CHECK_THROWS_AS(enumerate_paths(line, v, w, caps.max_length + 1), std::invalid_argument);
}

TEST_CASE("path-weight coefficients") {
    const auto line = free_halfline_graph();
    CHECK(beta_coefficient(line, VertexId::compact(0), VertexId::branch_site(1, 5), 5) ==
          doctest::Approx(1.0).epsilon(1e-15));

    const auto path = compact_path_graph({2.0, 3.0});
    CHECK(beta_coefficient(path, VertexId::compact(0), VertexId::compact(2), 2) ==
          doctest::Approx(6.0).epsilon(1e-15));

    const auto cyc = four_cycle_graph(0.5, 1.5, 2.0, 2.5);
    CHECK(beta_coefficient(cyc, VertexId::compact(0), VertexId::compact(2), 2) ==
          doctest::Approx(0.5 * 1.5 + 2.5 * 2.0).epsilon(1e-15));

    CHECK_THROWS_AS(beta_coefficient(line, VertexId::compact(0), VertexId::branch_site(1, 2), 3),
                    std::invalid_argument);
}

TEST_CASE("spherically homogeneous trees") {
    const auto lvl = free_potential();

    const auto t1 = build_sht({3, 3, 1, 1}, lvl);
    CHECK(t1.branch_count() == 9);
    CHECK(t1.compact_size() == 13);

    const auto t2 = build_sht({1, 1, 1}, lvl);
    CHECK(t2.branch_count() == 1);
    CHECK(t2.compact_size() == 1);

    const auto t3 = build_sht({2, 1, 1, 1, 1}, lvl);
    CHECK(t3.branch_count() == 2);
    CHECK(sht_ball_size({2, 1, 1, 1, 1}, 5) == 11.0);
    CHECK(ball_size(t3, VertexId::compact(0), 5) == 11);

    // sphere sizes of the realized graph match the branching data
    for (int n = 1; n <= 6; ++n)
        CHECK(ball_size(t1, VertexId::compact(0), n) == sht_ball_size({3, 3, 1, 1}, n));
}

TEST_CASE("tree dimension curves") {
    // branching identically 1: |B_n| = n + 1
    const auto flat = tree_dimension({1}, 10000);
    CHECK(flat.value == doctest::Approx(std::log(10001.0) / std::log(10000.0)).epsilon(1e-12));
    CHECK(std::abs(flat.value - 1.0) < 0.05);

    // eventually-1: value matches log|B_n|/log n exactly and drifts toward 1
    const std::vector<int> br{3, 3, 1};
    const auto dim = tree_dimension(br, 10000);
    CHECK(dim.value ==
          doctest::Approx(std::log(sht_ball_size(br, 10000)) / std::log(1e4)).epsilon(1e-12));
    CHECK(dim.value == doctest::Approx(1.0 + std::log(9.0) / std::log(1e4)).epsilon(1e-3));
    CHECK(dim.partial.size() == 9999);
    CHECK(dim.partial.back() < dim.partial[500]);

    // binary branching all the way out: the exponent grows without bound
    const std::vector<int> two200(200, 2);
    CHECK(tree_dimension(two200, 100).value > tree_dimension(two200, 50).value);
    CHECK(tree_dimension(two200, 100).value > 10.0);

    CHECK_THROWS_AS(tree_dimension({0, 2}, 100), std::invalid_argument);
    CHECK_THROWS_AS(tree_dimension({2}, 1), std::invalid_argument);
}
