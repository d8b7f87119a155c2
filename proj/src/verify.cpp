#include "lspan/verify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

namespace lspan {

std::optional<Algo> parse_algo(const std::string& name) {
    if (name == "3") return Algo::spanner3;
    if (name == "5") return Algo::spanner5;
    if (name == "k2") return Algo::k2;
    if (name == "bs") return Algo::bs;
    return std::nullopt;
}

std::string algo_name(Algo a) {
    switch (a) {
        case Algo::spanner3: return "3";
        case Algo::spanner5: return "5";
        case Algo::k2: return "k2";
        case Algo::bs: return "bs";
    }
    return "?";
}

namespace {

// Pure Baswana-Sen "LCA": explores the full-graph component of the queried
// edge through the oracle and replays the shared construction; component
// results are cached so full scans pay each component once.
class BSLocal {
  public:
    BSLocal(const GraphView& g, ProbeLedger& ledger, std::size_t k, std::uint64_t seed)
        : oracle_(g, ledger), k_(k), n_(g.n()), tape_(seed) {}

    bool query(Vertex u, Vertex v) {
        auto hit = comp_of_.find(u);
        if (hit != comp_of_.end()) return comp_edges_[hit->second].count(EdgeKey(u, v)) > 0;

        std::map<Vertex, std::vector<Vertex>> adj;
        std::vector<Vertex> verts;
        std::set<Vertex> seen{u};
        std::deque<Vertex> queue{u};
        while (!queue.empty()) {
            Vertex x = queue.front();
            queue.pop_front();
            verts.push_back(x);
            std::size_t d = oracle_.degree(x);
            for (std::size_t i = 1; i <= d; ++i) {
                Vertex y = oracle_.neighbor(x, i).value();
                adj[x].push_back(y);
                if (seen.insert(y).second) queue.push_back(y);
            }
        }
        std::sort(verts.begin(), verts.end());
        auto edges = baswana_sen_edges(verts, adj, k_, n_, tape_);
        std::size_t id = comp_edges_.size();
        comp_edges_.push_back(std::move(edges));
        for (Vertex x : verts) comp_of_[x] = id;
        return comp_edges_[id].count(EdgeKey(u, v)) > 0;
    }

  private:
    ProbeOracle oracle_;
    std::size_t k_;
    std::size_t n_;
    RandomTape tape_;
    std::map<Vertex, std::size_t> comp_of_;
    std::vector<std::set<EdgeKey>> comp_edges_;
};

}  // namespace

BuildResult build_spanner(Algo algo, const GraphView& g, std::uint64_t seed,
                          const AlgParams& params) {
    BuildResult out;
    auto edges = g.edges();
    if (edges.empty()) return out;

    std::uint64_t total = 0;
    auto record = [&](const EdgeKey& e, bool yes, std::uint64_t delta) {
        if (yes) out.edges.insert(e);
        total += delta;
        out.max_probes = std::max(out.max_probes, delta);
    };

    switch (algo) {
        case Algo::spanner3: {
            Spanner3Context ctx(g.n(), seed, params);
            for (const auto& e : edges) {
                ProbeLedger ledger;
                ProbeOracle oracle(g, ledger);
                bool yes = query3(e.lo, e.hi, ctx, oracle);
                out.ledger.merge(ledger);
                record(e, yes, ledger.total());
            }
            break;
        }
        case Algo::spanner5: {
            Spanner5Context ctx(g.n(), seed, params);
            ClusteringLog log;
            for (const auto& e : edges) {
                ProbeLedger ledger;
                ProbeOracle oracle(g, ledger);
                bool yes = query5(e.lo, e.hi, ctx, oracle, &log);
                out.ledger.merge(ledger);
                record(e, yes, ledger.total());
            }
            out.clustering_failures = log.events;
            break;
        }
        case Algo::k2: {
            SpannerK2Context ctx(g.n(), seed, params);
            ClusteringLog log;
            K2Local local(ctx, g, out.ledger);
            std::uint64_t prev = 0;
            for (const auto& e : edges) {
                bool yes = local.query_main(e.lo, e.hi, &log);
                std::uint64_t now = out.ledger.total();
                record(e, yes, now - prev);
                prev = now;
            }
            out.clustering_failures = log.events;
            break;
        }
        case Algo::bs: {
            BSLocal local(g, out.ledger, params.k, seed);
            std::uint64_t prev = 0;
            for (const auto& e : edges) {
                bool yes = local.query(e.lo, e.hi);
                std::uint64_t now = out.ledger.total();
                record(e, yes, now - prev);
                prev = now;
            }
            break;
        }
    }
    out.mean_probes = static_cast<double>(total) / static_cast<double>(edges.size());
    return out;
}

ProbeStats sample_probe_stats(Algo algo, const GraphView& g, std::uint64_t seed,
                              const AlgParams& params, std::size_t sample_size,
                              std::uint64_t sample_seed) {
    ProbeStats out;
    auto edges = g.edges();
    if (edges.empty()) return out;

    std::vector<std::size_t> idx(edges.size());
    std::iota(idx.begin(), idx.end(), 0);
    if (sample_size < edges.size()) {
        RandomTape pick(sample_seed);
        for (std::size_t j = 0; j < sample_size; ++j) {
            std::size_t r = j + pick.word_below(idx.size() - j, "sample", std::uint64_t(j));
            std::swap(idx[j], idx[r]);
        }
        idx.resize(sample_size);
    }

    std::uint64_t total = 0;
    auto run_one = [&](const EdgeKey& e) -> std::pair<std::uint64_t, bool> {
        ProbeLedger ledger;
        bool yes = false;
        switch (algo) {
            case Algo::spanner3: {
                Spanner3Context ctx(g.n(), seed, params);
                ProbeOracle oracle(g, ledger);
                yes = query3(e.lo, e.hi, ctx, oracle);
                break;
            }
            case Algo::spanner5: {
                Spanner5Context ctx(g.n(), seed, params);
                ProbeOracle oracle(g, ledger);
                yes = query5(e.lo, e.hi, ctx, oracle);
                break;
            }
            case Algo::k2: {
                SpannerK2Context ctx(g.n(), seed, params);
                K2Local local(ctx, g, ledger);
                yes = local.query_main(e.lo, e.hi);
                break;
            }
            case Algo::bs: {
                BSLocal local(g, ledger, params.k, seed);
                yes = local.query(e.lo, e.hi);
                break;
            }
        }
        return {ledger.total(), yes};
    };

    for (std::size_t j : idx) {
        auto [probes, yes] = run_one(edges[j]);
        total += probes;
        out.max_probes = std::max(out.max_probes, probes);
        if (yes) ++out.yes_count;
    }
    out.sampled = idx.size();
    out.mean_probes = static_cast<double>(total) / static_cast<double>(idx.size());
    return out;
}

std::set<EdgeKey> build_spanner3_reference(const GraphView& g, const Spanner3Context& ctx) {
    std::set<EdgeKey> out;
    const std::size_t delta = ctx.threshold;

    auto heavier_is = [&](Vertex a, Vertex b) {
        // true iff a plays u (deg(a) >= deg(b), tie: larger id)
        std::size_t da = g.degree(a), db = g.degree(b);
        return da > db || (da == db && a > b);
    };

    for (const auto& e : g.edges()) {
        Vertex u = heavier_is(e.lo, e.hi) ? e.lo : e.hi;
        Vertex v = (u == e.lo) ? e.hi : e.lo;
        if (g.degree(v) <= delta) {
            out.insert(e);
            continue;
        }
        std::size_t c = class_of(g.degree(u), delta);
        if (ctx.is_center(c, v)) {
            out.insert(e);
            continue;
        }
        std::vector<Vertex> centers;
        for (Vertex s : ctx.level_set(c))
            if (g.adjacent(u, s)) centers.push_back(s);
        if (centers.empty()) {
            out.insert(e);
            continue;
        }
        std::size_t i = g.index_of(v, u).value();
        std::size_t j_lo = (bucket_of(i, delta) - 1) * delta + 1;
        auto in_cluster = [&](Vertex y, Vertex x) {
            if (y == x) return false;
            std::size_t dy = g.degree(y);
            return dy > delta && class_of(dy, delta) == c && g.adjacent(x, y);
        };
        bool keep = false;
        for (Vertex x : centers) {
            bool blocked = false;
            for (std::size_t j = j_lo; j < i && !blocked; ++j)
                if (in_cluster(*g.neighbor(v, j), x)) blocked = true;
            if (!blocked) {
                keep = true;
                break;
            }
        }
        if (keep) out.insert(e);
    }
    return out;
}

namespace {

std::size_t aux_tree_height(std::size_t d) {
    std::size_t h = 0;
    while ((std::size_t{1} << h) < d) ++h;
    return h;
}

bool truncated_remote(const GraphView& g, Vertex v, std::size_t k, std::size_t L) {
    std::set<Vertex> seen{v};
    std::vector<Vertex> frontier{v};
    if (seen.size() >= L) return false;
    for (std::size_t layer = 1; layer <= k && !frontier.empty(); ++layer) {
        std::vector<Vertex> next;
        for (Vertex x : frontier)
            for (Vertex y : g.neighbors(x)) {
                if (!seen.insert(y).second) continue;
                next.push_back(y);
                if (seen.size() >= L) return false;
            }
        frontier = std::move(next);
    }
    return true;
}

}  // namespace

K2Structure analyze_k2(const GraphView& g, const SpannerK2Context& ctx) {
    const std::size_t n = g.n();
    K2Structure s;
    s.remote.assign(n, 0);
    s.dist.assign(n, K2Structure::kUnassigned);
    s.center.assign(n, 0);
    s.parent.assign(n, 0);
    s.cluster_of.assign(n, K2Structure::kUnassigned);

    for (Vertex v = 0; v < n; ++v)
        s.remote[v] = truncated_remote(g, v, ctx.k, ctx.L) ? 1 : 0;

    // Multi-source BFS over non-remote vertices from non-remote centers.
    std::vector<Vertex> order;
    std::deque<Vertex> queue;
    for (Vertex c : ctx.center_set())
        if (!s.remote[c]) {
            s.dist[c] = 0;
            queue.push_back(c);
        }
    while (!queue.empty()) {
        Vertex x = queue.front();
        queue.pop_front();
        order.push_back(x);
        for (Vertex y : g.neighbors(x)) {
            if (s.remote[y] || s.dist[y] != K2Structure::kUnassigned) continue;
            s.dist[y] = s.dist[x] + 1;
            queue.push_back(y);
        }
    }

    // Nearest center, min id at equal distance; then min-id same-center parent.
    for (Vertex x : order) {
        if (s.dist[x] == 0) {
            s.center[x] = x;
            s.parent[x] = x;
            continue;
        }
        bool found = false;
        for (Vertex y : g.neighbors(x)) {
            if (s.remote[y] || s.dist[y] + 1 != s.dist[x]) continue;
            if (!found || s.center[y] < s.center[x]) s.center[x] = s.center[y];
            found = true;
        }
    }
    for (Vertex x : order) {
        if (s.dist[x] == 0) continue;
        std::optional<Vertex> best;
        for (Vertex y : g.neighbors(x)) {
            if (s.remote[y] || s.dist[y] + 1 != s.dist[x] || s.center[y] != s.center[x]) continue;
            if (!best || y < *best) best = y;
        }
        s.parent[x] = *best;  // guaranteed: some neighbor put x in the queue
    }

    for (Vertex v = 0; v < n; ++v)
        if (!s.remote[v] && s.dist[v] == K2Structure::kUnassigned) s.failures.push_back(v);

    // Subtree sizes: leaves-up over the reversed BFS order.
    std::vector<std::size_t> size(n, 0);
    for (Vertex x : order) size[x] = 1;
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (s.dist[*it] != 0) size[s.parent[*it]] += size[*it];

    std::map<Vertex, std::vector<Vertex>> cells;
    for (Vertex x : order) cells[s.center[x]].push_back(x);

    auto emit = [&](ClusterDescriptor&& d) {
        std::sort(d.members.begin(), d.members.end());
        std::size_t id = s.clusters.size();
        for (Vertex m : d.members) {
            if (s.cluster_of[m] != K2Structure::kUnassigned)
                throw std::logic_error("analyze_k2: overlapping clusters");
            s.cluster_of[m] = id;
        }
        s.clusters.push_back(std::move(d));
    };

    for (auto& [c, members] : cells) {
        if (members.size() <= ctx.L) {
            ClusterDescriptor d;
            d.kind = ClusterDescriptor::Kind::whole_cell;
            d.center = c;
            d.members = members;
            emit(std::move(d));
            continue;
        }
        std::vector<Vertex> heavies;
        for (Vertex v : members)
            if (size[v] > ctx.L) heavies.push_back(v);
        std::sort(heavies.begin(), heavies.end());
        for (Vertex v : heavies) {
            ClusterDescriptor d;
            d.kind = ClusterDescriptor::Kind::singleton;
            d.center = c;
            d.members = {v};
            emit(std::move(d));
        }
        for (Vertex r : heavies) {
            std::size_t dr = g.degree(r);
            std::size_t h = aux_tree_height(dr);
            auto leaf_child = [&](std::size_t j) -> std::optional<Vertex> {
                Vertex y = *g.neighbor(r, j);
                if (s.remote[y] || s.dist[y] == K2Structure::kUnassigned) return std::nullopt;
                if (s.center[y] != c || s.dist[y] == 0) return std::nullopt;
                if (s.parent[y] != r) return std::nullopt;
                return y;
            };
            auto node_weight = [&](std::size_t lo, std::size_t hi) {
                std::size_t w = 0;
                for (std::size_t j = lo; j <= hi; ++j)
                    if (auto y = leaf_child(j)) w += size[*y];
                return w;
            };
            // Emit maximal weight-<=L nodes of B_r top-down.
            auto recurse = [&](auto&& self, std::size_t level, std::size_t pos) -> void {
                std::size_t span = std::size_t{1} << (h - level);
                std::size_t lo = (pos - 1) * span + 1;
                std::size_t hi = std::min(pos * span, dr);
                if (lo > hi) return;
                if (node_weight(lo, hi) <= ctx.L) {
                    ClusterDescriptor d;
                    d.kind = ClusterDescriptor::Kind::subtree_group;
                    d.center = c;
                    d.anchor_root = r;
                    d.anchor_level = level;
                    d.anchor_pos = pos;
                    for (std::size_t j = lo; j <= hi; ++j)
                        if (auto y = leaf_child(j); y && size[*y] > 0) {
                            // gather T(y)
                            std::vector<Vertex> stack{*y};
                            while (!stack.empty()) {
                                Vertex x = stack.back();
                                stack.pop_back();
                                d.members.push_back(x);
                                for (Vertex w : g.neighbors(x))
                                    if (!s.remote[w] && s.dist[w] != K2Structure::kUnassigned &&
                                        s.center[w] == c && s.dist[w] == s.dist[x] + 1 &&
                                        s.parent[w] == x)
                                        stack.push_back(w);
                            }
                        }
                    if (!d.members.empty()) emit(std::move(d));
                    return;
                }
                if (level == h) return;  // heavy leaf: covered by a singleton
                self(self, level + 1, 2 * pos - 1);
                self(self, level + 1, 2 * pos);
            };
            recurse(recurse, 0, 1);
        }
    }
    return s;
}

std::set<EdgeKey> build_spanner_k2_reference(const GraphView& g, const SpannerK2Context& ctx,
                                             ClusteringLog* log) {
    K2Structure s = analyze_k2(g, ctx);
    std::set<EdgeKey> out;

    auto assigned = [&](Vertex v) { return !s.remote[v] && s.dist[v] != K2Structure::kUnassigned; };
    auto marked = [&](Vertex center) { return ctx.cell_marked(center); };

    // Lazy per-cluster engagement and boundary-center sets.
    std::vector<std::optional<std::optional<std::size_t>>> engagement(s.clusters.size());
    std::vector<std::optional<std::set<Vertex>>> boundary(s.clusters.size());

    auto adjacent_centers = [&](std::size_t a) -> const std::set<Vertex>& {
        if (!boundary[a]) {
            std::set<Vertex> cen;
            for (Vertex m : s.clusters[a].members)
                for (Vertex y : g.neighbors(m)) {
                    if (!assigned(y) || s.center[y] == s.clusters[a].center) continue;
                    cen.insert(s.center[y]);
                }
            boundary[a] = std::move(cen);
        }
        return *boundary[a];
    };

    auto engaged_with = [&](std::size_t b) -> std::optional<std::size_t> {
        if (!engagement[b]) {
            std::optional<EdgeKey> best;
            std::optional<Vertex> far;
            const auto& B = s.clusters[b];
            for (Vertex m : B.members)
                for (Vertex y : g.neighbors(m)) {
                    if (!assigned(y) || B.contains(y) || !marked(s.center[y])) continue;
                    EdgeKey e(m, y);
                    if (!best || edge_rank_less(e, *best)) {
                        best = e;
                        far = y;
                    }
                }
            engagement[b] = best ? std::optional<std::size_t>(s.cluster_of[*far]) : std::nullopt;
        }
        return *engagement[b];
    };

    auto min_rank_into_cluster = [&](std::size_t a, std::size_t b) {
        std::optional<EdgeKey> best;
        const auto& B = s.clusters[b];
        for (Vertex m : s.clusters[a].members)
            for (Vertex y : g.neighbors(m))
                if (B.contains(y)) {
                    EdgeKey e(m, y);
                    if (!best || edge_rank_less(e, *best)) best = e;
                }
        return best;
    };

    auto min_rank_into_cell = [&](std::size_t a, Vertex cell_center) {
        std::optional<EdgeKey> best;
        for (Vertex m : s.clusters[a].members)
            for (Vertex y : g.neighbors(m))
                if (assigned(y) && s.center[y] == cell_center) {
                    EdgeKey e(m, y);
                    if (!best || edge_rank_less(e, *best)) best = e;
                }
        return best;
    };

    auto conditions = [&](std::size_t a, std::size_t b, const EdgeKey& e) {
        const auto& A = s.clusters[a];
        const auto& B = s.clusters[b];
        if (marked(A.center)) {
            auto m = min_rank_into_cluster(a, b);
            if (m && *m == e) return true;
        }
        if (!engaged_with(a)) {
            auto m = min_rank_into_cell(a, B.center);
            if (m && *m == e) return true;
        }
        if (auto c = engaged_with(b)) {
            auto m = min_rank_into_cell(a, B.center);
            if (m && *m == e) {
                const auto& cenA = adjacent_centers(a);
                const auto& cenC = adjacent_centers(*c);
                std::vector<Vertex> inter;
                for (Vertex x : cenA)
                    if (cenC.count(x)) inter.push_back(x);
                std::sort(inter.begin(), inter.end(), [&](Vertex p, Vertex q) {
                    return cell_rank_less(p, q, ctx.tape);
                });
                std::size_t limit = std::min(ctx.con2_limit, inter.size());
                for (std::size_t i = 0; i < limit; ++i)
                    if (inter[i] == B.center) return true;
            }
        }
        return false;
    };

    // H = edges with a remote endpoint, handled by Baswana-Sen per component.
    std::map<Vertex, std::vector<Vertex>> h_adj;
    for (const auto& e : g.edges()) {
        Vertex u = e.lo, v = e.hi;
        if (s.remote[u] || s.remote[v]) {
            h_adj[u].push_back(v);
            h_adj[v].push_back(u);
            continue;
        }
        bool u_fail = s.dist[u] == K2Structure::kUnassigned;
        bool v_fail = s.dist[v] == K2Structure::kUnassigned;
        if (u_fail || v_fail) {
            if (log) ++log->events;
            out.insert(e);
            continue;
        }
        if (s.center[u] == s.center[v]) {
            if (s.parent[u] == v || s.parent[v] == u) out.insert(e);
            continue;
        }
        std::size_t cu = s.cluster_of[u], cv = s.cluster_of[v];
        if (conditions(cu, cv, e) || conditions(cv, cu, e)) out.insert(e);
    }

    // Components of H, each replayed with the shared construction.
    std::set<Vertex> done;
    for (const auto& [start, nb] : h_adj) {
        if (done.count(start)) continue;
        std::vector<Vertex> verts;
        std::map<Vertex, std::vector<Vertex>> adj;
        std::deque<Vertex> queue{start};
        done.insert(start);
        while (!queue.empty()) {
            Vertex x = queue.front();
            queue.pop_front();
            verts.push_back(x);
            auto it = h_adj.find(x);
            if (it == h_adj.end()) continue;
            adj[x] = it->second;
            for (Vertex y : it->second)
                if (done.insert(y).second) queue.push_back(y);
        }
        std::sort(verts.begin(), verts.end());
        auto kept = baswana_sen_edges(verts, adj, ctx.k, ctx.n, ctx.tape);
        out.insert(kept.begin(), kept.end());
    }
    return out;
}

std::set<EdgeKey> build_spanner_bs_reference(const GraphView& g, std::size_t k,
                                             std::uint64_t seed) {
    RandomTape tape(seed);
    std::set<EdgeKey> out;
    std::vector<char> done(g.n(), 0);
    for (Vertex start = 0; start < g.n(); ++start) {
        if (done[start] || g.degree(start) == 0) continue;
        std::vector<Vertex> verts;
        std::map<Vertex, std::vector<Vertex>> adj;
        std::deque<Vertex> queue{start};
        done[start] = 1;
        while (!queue.empty()) {
            Vertex x = queue.front();
            queue.pop_front();
            verts.push_back(x);
            adj[x] = g.neighbors(x);
            for (Vertex y : g.neighbors(x))
                if (!done[y]) {
                    done[y] = 1;
                    queue.push_back(y);
                }
        }
        std::sort(verts.begin(), verts.end());
        auto kept = baswana_sen_edges(verts, adj, k, g.n(), tape);
        out.insert(kept.begin(), kept.end());
    }
    return out;
}

StretchReport check_stretch(const GraphView& g, const std::set<EdgeKey>& spanner,
                            std::size_t bound) {
    StretchReport rep;
    rep.bound = bound;

    std::vector<std::vector<Vertex>> adj(g.n());
    for (const auto& e : spanner) {
        if (!g.adjacent(e.lo, e.hi))
            throw std::invalid_argument("check_stretch: spanner edge not in graph");
        adj[e.lo].push_back(e.hi);
        adj[e.hi].push_back(e.lo);
    }

    std::vector<std::size_t> dist(g.n(), 0);
    std::vector<Vertex> touched;

    for (const auto& e : g.edges()) {
        if (spanner.count(e)) continue;
        ++rep.removed_edges;
        // truncated BFS from e.lo to e.hi within the spanner
        std::size_t found = bound + 1;
        for (Vertex t : touched) dist[t] = 0;
        touched.clear();
        std::deque<Vertex> queue{e.lo};
        dist[e.lo] = 1;  // store dist+1; 0 means unvisited
        touched.push_back(e.lo);
        while (!queue.empty()) {
            Vertex x = queue.front();
            queue.pop_front();
            std::size_t dx = dist[x] - 1;
            if (dx >= bound) continue;
            for (Vertex y : adj[x]) {
                if (dist[y]) continue;
                dist[y] = dx + 2;
                touched.push_back(y);
                if (y == e.hi) {
                    found = dx + 1;
                    queue.clear();
                    break;
                }
                queue.push_back(y);
            }
        }
        if (found > bound) ++rep.unreachable;
        rep.max_stretch = std::max(rep.max_stretch, found);
        rep.offenders.emplace_back(e, found);
        std::sort(rep.offenders.begin(), rep.offenders.end(),
                  [](const auto& a, const auto& b) { return a.second > b.second; });
        if (rep.offenders.size() > 10)
            rep.offenders.erase(rep.offenders.begin() + 10, rep.offenders.end());
    }
    rep.pass = rep.max_stretch <= bound;
    return rep;
}

namespace {

struct DSU {
    std::vector<Vertex> p;
    explicit DSU(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    Vertex find(Vertex x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(Vertex a, Vertex b) { p[find(a)] = find(b); }
};

}  // namespace

bool check_connectivity(const GraphView& g, const std::set<EdgeKey>& spanner) {
    DSU dsu(g.n());
    for (const auto& e : spanner) dsu.unite(e.lo, e.hi);
    for (const auto& e : g.edges())
        if (dsu.find(e.lo) != dsu.find(e.hi)) return false;
    return true;
}

ContractedPair contract_voronoi(const GraphView& g, const K2Structure& s,
                                const std::set<EdgeKey>& spanner) {
    ContractedPair out;
    std::map<Vertex, Vertex> cell_idx;  // center -> contracted id
    for (Vertex v = 0; v < g.n(); ++v)
        if (!s.remote[v] && s.dist[v] != K2Structure::kUnassigned) cell_idx.emplace(s.center[v], 0);
    for (auto& [c, idx] : cell_idx) {
        idx = static_cast<Vertex>(out.cell_centers.size());
        out.cell_centers.push_back(c);
    }

    std::set<std::pair<Vertex, Vertex>> ge, se;
    for (const auto& e : g.edges()) {
        Vertex u = e.lo, v = e.hi;
        if (s.remote[u] || s.remote[v]) continue;
        if (s.dist[u] == K2Structure::kUnassigned || s.dist[v] == K2Structure::kUnassigned)
            continue;
        if (s.center[u] == s.center[v]) continue;
        Vertex a = cell_idx.at(s.center[u]), b = cell_idx.at(s.center[v]);
        std::pair<Vertex, Vertex> key{std::min(a, b), std::max(a, b)};
        ge.insert(key);
        if (spanner.count(e)) se.insert(key);
    }
    std::vector<std::pair<Vertex, Vertex>> gv(ge.begin(), ge.end()), sv(se.begin(), se.end());
    out.g_vor = GraphView(out.cell_centers.size(), gv);
    out.spanner_vor = GraphView(out.cell_centers.size(), sv);
    return out;
}

ClusterInvariantReport check_cluster_invariants(const GraphView& g, const SpannerK2Context& ctx) {
    ClusterInvariantReport rep;
    K2Structure s;
    try {
        s = analyze_k2(g, ctx);
    } catch (const std::logic_error&) {
        return rep;  // overlapping clusters: everything stays false
    }
    rep.failure_vertices = s.failures.size();

    std::size_t assigned = 0, covered = 0;
    bool ok = true;
    for (Vertex v = 0; v < g.n(); ++v) {
        if (s.remote[v] || s.dist[v] == K2Structure::kUnassigned) continue;
        ++assigned;
        if (s.cluster_of[v] == K2Structure::kUnassigned) ok = false;
    }
    for (const auto& c : s.clusters) {
        covered += c.members.size();
        for (Vertex m : c.members)
            if (s.remote[m] || s.dist[m] == K2Structure::kUnassigned || s.center[m] != c.center)
                ok = false;
    }
    rep.partition_ok = ok && covered == assigned;

    rep.sizes_ok = true;
    for (const auto& c : s.clusters)
        if (c.kind != ClusterDescriptor::Kind::singleton && c.members.size() > ctx.L)
            rep.sizes_ok = false;

    std::size_t max_deg = 0;
    for (Vertex v = 0; v < g.n(); ++v) max_deg = std::max(max_deg, g.degree(v));
    double log_delta = std::log2(static_cast<double>(std::max<std::size_t>(max_deg, 2)));
    rep.cluster_count = s.clusters.size();
    rep.count_bound = static_cast<double>(ctx.center_set().size()) +
                      4.0 * static_cast<double>(g.n()) * static_cast<double>(ctx.k) * log_delta /
                          static_cast<double>(ctx.L);
    rep.count_ok = static_cast<double>(rep.cluster_count) <= rep.count_bound;
    return rep;
}

}  // namespace lspan
