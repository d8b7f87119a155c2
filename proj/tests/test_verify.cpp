// Checkers and reference builders: stretch, connectivity, contraction,
// and agreement between the full-scan driver and the global replays.
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "lspan/verify.hpp"

using namespace lspan;

namespace {

std::set<EdgeKey> all_edges(const GraphView& g) {
    auto e = g.edges();
    return {e.begin(), e.end()};
}

AlgParams small_params() {
    AlgParams p;
    p.c_centers = 0.05;
    p.c_L = 1.0 / 12.0;
    p.k = 4;
    return p;
}

std::vector<Vertex> non_centers(const SpannerK2Context& ctx, std::size_t count) {
    std::vector<Vertex> out;
    for (Vertex v = 0; out.size() < count; ++v)
        if (!ctx.is_center(v)) out.push_back(v);
    return out;
}

}  // namespace

TEST_CASE("algo names round-trip") {
    for (Algo a : {Algo::spanner3, Algo::spanner5, Algo::k2, Algo::bs})
        CHECK(parse_algo(algo_name(a)) == a);
    CHECK_FALSE(parse_algo("nope").has_value());
}

TEST_CASE("stretch of a cycle missing one edge") {
    GraphView c4(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    std::set<EdgeKey> spanner{EdgeKey(0, 1), EdgeKey(1, 2), EdgeKey(2, 3)};

    StretchReport r = check_stretch(c4, spanner, 3);
    CHECK(r.removed_edges == 1);
    CHECK(r.max_stretch == 3);  // detour 0-1-2-3
    CHECK(r.unreachable == 0);
    CHECK(r.pass);

    StretchReport tight = check_stretch(c4, spanner, 2);
    CHECK_FALSE(tight.pass);
    REQUIRE_FALSE(tight.offenders.empty());
    CHECK(tight.offenders.front().first == EdgeKey(0, 3));
}

TEST_CASE("stretch is vacuous when nothing is removed") {
    GraphView g = gen_gnp(80, 0.1, 5);
    StretchReport r = check_stretch(g, all_edges(g), 1);
    CHECK(r.removed_edges == 0);
    CHECK(r.max_stretch == 0);
    CHECK(r.pass);
}

TEST_CASE("unreachable removed edge fails with stretch bound+1") {
    // two triangles joined by a bridge; drop the bridge from the spanner
    GraphView g(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
    std::set<EdgeKey> spanner = all_edges(g);
    spanner.erase(EdgeKey(2, 3));
    StretchReport r = check_stretch(g, spanner, 5);
    CHECK(r.removed_edges == 1);
    CHECK(r.unreachable == 1);
    CHECK(r.max_stretch == 6);
    CHECK_FALSE(r.pass);
}

TEST_CASE("connectivity checker compares components") {
    GraphView g = gen_gnp(120, 0.08, 3);
    CHECK(check_connectivity(g, all_edges(g)));

    // a spanning tree of each component preserves connectivity
    std::set<EdgeKey> tree;
    std::vector<char> seen(g.n(), 0);
    for (Vertex r = 0; r < g.n(); ++r) {
        if (seen[r]) continue;
        seen[r] = 1;
        std::vector<Vertex> q{r};
        for (std::size_t h = 0; h < q.size(); ++h)
            for (Vertex y : g.neighbors(q[h]))
                if (!seen[y]) {
                    seen[y] = 1;
                    tree.insert(EdgeKey(q[h], y));
                    q.push_back(y);
                }
    }
    CHECK(check_connectivity(g, tree));

    // dropping a bridge breaks it
    GraphView bridged(4, {{0, 1}, {1, 2}, {2, 3}});
    std::set<EdgeKey> cut{EdgeKey(0, 1), EdgeKey(2, 3)};
    CHECK_FALSE(check_connectivity(bridged, cut));
}

TEST_CASE("a tree survives every algorithm intact") {
    // star-of-paths tree on 40 vertices
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex v = 1; v < 40; ++v) e.emplace_back(v, (v - 1) / 3);
    GraphView g(40, e);
    for (Algo a : {Algo::spanner3, Algo::spanner5}) {
        BuildResult r = build_spanner(a, g, 17);
        CHECK(r.edges == all_edges(g));
        CHECK(check_connectivity(g, r.edges));
    }
}

TEST_CASE("full-scan driver matches the global replays") {
    GraphView g = gen_gnp(200, 0.3, 1);
    {
        BuildResult r = build_spanner(Algo::spanner3, g, 6);
        Spanner3Context ctx(g.n(), 6, {});
        CHECK(r.edges == build_spanner3_reference(g, ctx));
        CHECK(r.max_probes >= static_cast<std::uint64_t>(r.mean_probes));
        CHECK(r.mean_probes > 0.0);
    }
    {
        BuildResult r = build_spanner(Algo::spanner5, g, 6);
        Spanner5Context ctx(g.n(), 6, {});
        ClusteringLog log;
        CHECK(r.edges == build_spanner5_global(g, ctx, &log));
        CHECK(r.clustering_failures == log.events);
    }
    for (const EdgeKey& e2 : build_spanner(Algo::spanner3, g, 6).edges)
        CHECK(g.adjacent(e2.lo, e2.hi));
}

TEST_CASE("voronoi contraction of a single cell is a single vertex") {
    AlgParams p = small_params();
    SpannerK2Context ctx(512, 3, p);
    Vertex r = ctx.center_set()[0];
    auto ids = non_centers(ctx, 6);
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex x : ids) e.emplace_back(r, x);
    GraphView g(512, e);

    K2Structure s = analyze_k2(g, ctx);
    ContractedPair c = contract_voronoi(g, s, all_edges(g));
    REQUIRE(c.cell_centers == std::vector<Vertex>{r});
    CHECK(c.g_vor.n() == 1);
    CHECK(c.g_vor.m() == 0);
    CHECK(c.spanner_vor.m() == 0);
}

TEST_CASE("voronoi contraction keeps a crossing edge iff the spanner does") {
    AlgParams p = small_params();
    SpannerK2Context ctx(512, 3, p);
    Vertex c1 = ctx.center_set()[0], c2 = ctx.center_set()[1];
    auto ids = non_centers(ctx, 12);
    std::vector<std::pair<Vertex, Vertex>> e;
    for (int i = 0; i < 6; ++i) e.emplace_back(c1, ids[i]);
    for (int i = 6; i < 12; ++i) e.emplace_back(c2, ids[i]);
    e.emplace_back(ids[0], ids[6]);  // the one cell-crossing edge
    GraphView g(512, e);

    K2Structure s = analyze_k2(g, ctx);
    REQUIRE(s.dist[ids[0]] == 1);
    REQUIRE(s.center[ids[0]] == c1);
    REQUIRE(s.center[ids[6]] == c2);

    ContractedPair with = contract_voronoi(g, s, all_edges(g));
    std::vector<Vertex> want{std::min(c1, c2), std::max(c1, c2)};
    REQUIRE(with.cell_centers == want);
    CHECK(with.g_vor.m() == 1);
    CHECK(with.spanner_vor.m() == 1);

    std::set<EdgeKey> no_cross = all_edges(g);
    no_cross.erase(EdgeKey(ids[0], ids[6]));
    ContractedPair without = contract_voronoi(g, s, no_cross);
    CHECK(without.g_vor.m() == 1);
    CHECK(without.spanner_vor.m() == 0);
}

TEST_CASE("whole-graph baswana-sen meets its own guarantees") {
    GraphView g = gen_gnp(300, 0.05, 9);
    for (std::size_t k : {2u, 3u}) {
        std::set<EdgeKey> sp = build_spanner_bs_reference(g, k, 41);
        CHECK(check_connectivity(g, sp));
        CHECK(check_stretch(g, sp, 2 * k - 1).pass);
    }
}
