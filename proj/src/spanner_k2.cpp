#include "lspan/spanner_k2.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace lspan {

namespace {

// Aux-tree geometry: leaves live at level h, the smallest h with 2^h >= d.
std::size_t aux_tree_height(std::size_t d) {
    std::size_t h = 0;
    while ((std::size_t{1} << h) < d) ++h;
    return h;
}

std::pair<std::size_t, std::size_t> aux_node_range(std::size_t h, std::size_t level,
                                                   std::size_t pos) {
    std::size_t span = std::size_t{1} << (h - level);
    return {(pos - 1) * span + 1, pos * span};
}

}  // namespace

SpannerK2Context::SpannerK2Context(std::size_t n_, std::uint64_t seed, const AlgParams& params)
    : n(n_),
      k(params.k),
      L(0),
      p_mark(std::pow(static_cast<double>(n_ > 1 ? n_ : 2), -1.0 / 3.0)),
      con2_limit(0),
      tape(seed),
      centers(n_,
              std::min<std::size_t>(
                  n_, static_cast<std::size_t>(std::ceil(
                          params.c_centers *
                          std::pow(static_cast<double>(n_ > 1 ? n_ : 2), 2.0 / 3.0) * log2n(n_)))),
              1, tape, "S") {
    if (n == 0) throw std::invalid_argument("SpannerK2Context: empty graph");
    std::size_t k_cap = static_cast<std::size_t>(
        std::ceil(std::log2(static_cast<double>(n > 1 ? n : 2))));
    if (k < 1) k = 1;
    if (k > k_cap) k = k_cap;
    L = static_cast<std::size_t>(
        std::ceil(params.c_L * std::cbrt(static_cast<double>(n)) * log2n(n)));
    if (L < 1) L = 1;
    con2_limit = static_cast<std::size_t>(
        std::ceil(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(k)) * log2n(n)));
    if (con2_limit < 1) con2_limit = 1;
}

bool ClusterDescriptor::contains(Vertex v) const {
    return std::binary_search(members.begin(), members.end(), v);
}

std::size_t K2Local::deg(Vertex v) {
    auto it = deg_cache_.find(v);
    if (it != deg_cache_.end()) return it->second;
    std::size_t d = oracle_.degree(v);
    deg_cache_[v] = d;
    return d;
}

Vertex K2Local::nbr(Vertex v, std::size_t i) {
    auto& fetched = nbr_cache_[v];
    while (fetched.size() < i)
        fetched.push_back(oracle_.neighbor(v, fetched.size() + 1).value());
    return fetched[i - 1];
}

bool K2Local::is_remote(Vertex v) {
    auto it = remote_memo_.find(v);
    if (it != remote_memo_.end()) return it->second;

    // Cheap certificates first. A past exploration that saw L vertices within
    // radius r of its root covers any v it recorded at depth d with d + r <= k:
    // those L vertices are within distance k of v too. The same holds one hop
    // wider through v's own neighbor list (d + 1 + r <= k).
    auto ball_covers = [&](Vertex y, std::size_t slack) {
        for (const RemoteBall& ball : remote_balls_) {
            auto bit = ball.depth.find(y);
            if (bit != ball.depth.end() && bit->second + slack + ball.radius <= ctx_.k)
                return true;
        }
        return false;
    };
    bool covered = ball_covers(v, 0);
    if (!covered) {
        std::size_t d = deg(v);
        for (std::size_t i = 1; i <= d && !covered; ++i) covered = ball_covers(nbr(v, i), 1);
    }
    // Fallback certificate: truncated BFS over already-cached adjacency
    // prefixes, an undercount of |Γ_k(v)| needing no new probes.
    if (covered || cached_nonremote(v)) {
        remote_memo_[v] = false;
        return false;
    }

    // Truncated BFS: stop as soon as L vertices are seen or k layers done.
    std::unordered_map<Vertex, std::size_t> depth{{v, 0}};
    std::vector<Vertex> frontier{v};
    std::size_t radius = 0;
    bool remote = true;
    if (depth.size() >= ctx_.L) remote = false;
    for (std::size_t layer = 1; layer <= ctx_.k && remote && !frontier.empty(); ++layer) {
        std::vector<Vertex> next;
        for (Vertex x : frontier) {
            std::size_t d = deg(x);
            for (std::size_t i = 1; i <= d && remote; ++i) {
                Vertex y = nbr(x, i);
                if (!depth.emplace(y, layer).second) continue;
                next.push_back(y);
                radius = layer;
                if (depth.size() >= ctx_.L) remote = false;
            }
            if (!remote) break;
        }
        frontier = std::move(next);
    }
    if (!remote) remote_balls_.push_back({radius, std::move(depth)});
    remote_memo_[v] = remote;
    return remote;
}

bool K2Local::cached_nonremote(Vertex v) const {
    std::set<Vertex> seen{v};
    if (seen.size() >= ctx_.L) return true;
    std::vector<Vertex> frontier{v};
    for (std::size_t layer = 1; layer <= ctx_.k && !frontier.empty(); ++layer) {
        std::vector<Vertex> next;
        for (Vertex x : frontier) {
            auto it = nbr_cache_.find(x);
            if (it == nbr_cache_.end()) continue;
            for (Vertex y : it->second) {
                if (!seen.insert(y).second) continue;
                next.push_back(y);
                if (seen.size() >= ctx_.L) return true;
            }
        }
        frontier = std::move(next);
    }
    return false;
}

K2Local::Assign K2Local::assign(Vertex v) {
    auto it = assign_memo_.find(v);
    if (it != assign_memo_.end()) return it->second;
    if (is_remote(v)) throw std::logic_error("assign: vertex is remote");

    // BFS layer by layer over non-remote vertices; the first layer holding a
    // non-remote center wins, min center id breaks ties. Remoteness checks are
    // lazy: a candidate is verified only when it might win as a center or when
    // a path through it is about to be relied on. Distances 0-2 cover almost
    // every call, so they get dedicated lazy handling; deeper searches fall
    // back to the eager BFS below.
    Assign result{0, 0, false};
    bool resolved = false;
    if (ctx_.is_center(v)) {
        result = {v, 0, true};
        resolved = true;
    }
    std::vector<Vertex> layer1;
    if (!resolved) {
        std::set<Vertex> seen1{v};
        std::size_t d = deg(v);
        for (std::size_t i = 1; i <= d; ++i) {
            Vertex y = nbr(v, i);
            if (seen1.insert(y).second) layer1.push_back(y);
        }
        std::vector<Vertex> centers;
        for (Vertex y : layer1)
            if (ctx_.is_center(y)) centers.push_back(y);
        std::sort(centers.begin(), centers.end());
        for (Vertex c : centers)
            if (!is_remote(c)) {
                result = {c, 1, true};
                resolved = true;
                break;
            }
    }
    if (!resolved) {
        // Unverified layer 2 with parent tracking: a center c at graph
        // distance 2 wins iff c is non-remote and some layer-1 parent is
        // non-remote (then the induced distance is exactly 2). A smaller-id
        // center failing that check has induced distance > 2 and is skipped.
        std::set<Vertex> inner{v};
        inner.insert(layer1.begin(), layer1.end());
        std::map<Vertex, std::vector<Vertex>> parents;
        for (Vertex x : layer1) {
            std::size_t d = deg(x);
            for (std::size_t i = 1; i <= d; ++i) {
                Vertex y = nbr(x, i);
                if (!inner.count(y)) parents[y].push_back(x);
            }
        }
        for (auto& [c, ps] : parents) {
            if (!ctx_.is_center(c) || is_remote(c)) continue;
            for (Vertex x : ps)
                if (!is_remote(x)) {
                    result = {c, 2, true};
                    resolved = true;
                    break;
                }
            if (resolved) break;
        }
    }
    if (resolved) {
        assign_memo_[v] = result;
        return result;
    }

    std::set<Vertex> seen{v};
    std::vector<Vertex> frontier{v};
    std::size_t dist = 0;
    while (!frontier.empty()) {
        std::vector<Vertex> centers;
        for (Vertex x : frontier)
            if (ctx_.is_center(x)) centers.push_back(x);
        std::sort(centers.begin(), centers.end());
        bool found = false;
        for (Vertex c : centers)
            if (!is_remote(c)) {
                result = {c, dist, true};
                found = true;
                break;
            }
        if (found) break;
        std::vector<Vertex> next;
        for (Vertex x : frontier) {
            if (is_remote(x)) continue;
            std::size_t d = deg(x);
            for (std::size_t i = 1; i <= d; ++i) {
                Vertex y = nbr(x, i);
                if (!seen.insert(y).second) continue;
                next.push_back(y);
            }
        }
        frontier = std::move(next);
        ++dist;
    }
    assign_memo_[v] = result;
    return result;
}

Vertex K2Local::parent_of(Vertex v) {
    auto it = parent_memo_.find(v);
    if (it != parent_memo_.end()) return it->second;
    Assign a = assign(v);
    if (!a.ok) throw ClusteringFailure(v);
    Vertex p = v;
    if (a.dist > 0) {
        bool found = false;
        std::size_t d = deg(v);
        for (std::size_t i = 1; i <= d; ++i) {
            Vertex w = nbr(v, i);
            if (is_remote(w)) continue;
            Assign aw = assign(w);
            if (!aw.ok || aw.center != a.center || aw.dist + 1 != a.dist) continue;
            if (!found || w < p) {
                p = w;
                found = true;
            }
        }
        if (!found) throw std::logic_error("parent_of: no closer neighbor");  // unreachable
    }
    parent_memo_[v] = p;
    return p;
}

std::vector<Vertex> K2Local::children_of(Vertex v) {
    Assign a = assign(v);
    std::vector<Vertex> out;
    std::size_t d = deg(v);
    for (std::size_t i = 1; i <= d; ++i) {
        Vertex w = nbr(v, i);
        if (is_remote(w)) continue;
        Assign aw = assign(w);
        if (!aw.ok || aw.center != a.center || aw.dist != a.dist + 1) continue;
        if (parent_of(w) == v) out.push_back(w);
    }
    return out;
}

std::size_t K2Local::capped_subtree(Vertex v) {
    auto it = subtree_memo_.find(v);
    if (it != subtree_memo_.end()) return it->second;
    std::size_t count = 0;
    std::vector<Vertex> stack{v};
    while (!stack.empty() && count <= ctx_.L) {
        Vertex x = stack.back();
        stack.pop_back();
        ++count;
        for (Vertex c : children_of(x)) stack.push_back(c);
    }
    if (count > ctx_.L) count = ctx_.L + 1;
    subtree_memo_[v] = count;
    return count;
}

std::vector<Vertex> K2Local::collect_subtree(Vertex v) {
    std::vector<Vertex> out;
    std::vector<Vertex> stack{v};
    while (!stack.empty()) {
        Vertex x = stack.back();
        stack.pop_back();
        out.push_back(x);
        for (Vertex c : children_of(x)) stack.push_back(c);
    }
    return out;
}

bool K2Local::subtree_heavy(Vertex v) { return capped_subtree(v) > ctx_.L; }

std::vector<Vertex> K2Local::explore_cell(Vertex center) {
    auto it = cell_memo_.find(center);
    if (it != cell_memo_.end()) return it->second;
    // BFS within the cell from its center, stopping past L+1 members.
    std::set<Vertex> seen{center};
    std::deque<Vertex> queue{center};
    std::vector<Vertex> members;
    while (!queue.empty() && members.size() <= ctx_.L) {
        Vertex x = queue.front();
        queue.pop_front();
        members.push_back(x);
        std::size_t d = deg(x);
        for (std::size_t i = 1; i <= d; ++i) {
            Vertex y = nbr(x, i);
            if (seen.count(y) || is_remote(y)) continue;
            Assign ay = assign(y);
            if (!ay.ok || ay.center != center) continue;
            seen.insert(y);
            queue.push_back(y);
        }
    }
    cell_memo_[center] = members;
    return members;
}

VoronoiAssignment K2Local::find_center(Vertex v) {
    Assign a = assign(v);
    if (!a.ok) throw ClusteringFailure(v);
    return {v, a.center, a.dist, parent_of(v)};
}

ClusterDescriptor K2Local::aux_locate(Vertex u, Vertex r) {
    Assign a = assign(u);
    std::size_t dr = deg(r);
    std::size_t iu = oracle_.adjacent(r, u).value();
    std::size_t h = aux_tree_height(dr);

    // Leaf weight: |T(y)| for BFS children of r (capped at L+1), 0 otherwise.
    auto leaf_weight = [&](std::size_t j) -> std::size_t {
        Vertex y = nbr(r, j);
        if (is_remote(y)) return 0;
        Assign ay = assign(y);
        if (!ay.ok || ay.center != a.center) return 0;
        if (ay.dist == 0) return 0;  // the center is nobody's child
        if (parent_of(y) != r) return 0;
        return capped_subtree(y);
    };
    auto node_weight = [&](std::size_t level, std::size_t pos) -> std::size_t {
        auto [lo, hi] = aux_node_range(h, level, pos);
        if (hi > dr) hi = dr;
        std::size_t w = 0;
        for (std::size_t j = lo; j <= hi; ++j) {
            w += leaf_weight(j);
            if (w > ctx_.L) return ctx_.L + 1;
        }
        return w;
    };

    std::size_t level = h, pos = iu;
    while (level > 0) {
        std::size_t pl = level - 1, pp = (pos + 1) / 2;
        if (node_weight(pl, pp) > ctx_.L) break;
        level = pl;
        pos = pp;
    }

    ClusterDescriptor desc;
    desc.kind = ClusterDescriptor::Kind::subtree_group;
    desc.center = a.center;
    desc.anchor_root = r;
    desc.anchor_level = level;
    desc.anchor_pos = pos;
    auto [lo, hi] = aux_node_range(h, level, pos);
    if (hi > dr) hi = dr;
    for (std::size_t j = lo; j <= hi; ++j) {
        if (leaf_weight(j) == 0) continue;
        Vertex y = nbr(r, j);
        auto sub = collect_subtree(y);
        desc.members.insert(desc.members.end(), sub.begin(), sub.end());
    }
    std::sort(desc.members.begin(), desc.members.end());
    return desc;
}

ClusterDescriptor K2Local::cluster_of(Vertex v) {
    Assign a = assign(v);
    if (!a.ok) throw ClusteringFailure(v);
    auto cell = explore_cell(a.center);
    ClusterDescriptor desc;
    desc.center = a.center;
    if (cell.size() <= ctx_.L) {
        desc.kind = ClusterDescriptor::Kind::whole_cell;
        desc.members = cell;
        std::sort(desc.members.begin(), desc.members.end());
        return desc;
    }
    if (subtree_heavy(v)) {
        desc.kind = ClusterDescriptor::Kind::singleton;
        desc.members = {v};
        return desc;
    }
    Vertex u = v;
    while (true) {
        Vertex p = parent_of(u);
        if (subtree_heavy(p)) break;
        u = p;
    }
    return aux_locate(u, parent_of(u));
}

std::set<Vertex> K2Local::adjacent_centers(const ClusterDescriptor& A) {
    std::set<Vertex> out;
    for (Vertex a : A.members) {
        std::size_t d = deg(a);
        for (std::size_t i = 1; i <= d; ++i) {
            Vertex y = nbr(a, i);
            if (is_remote(y)) continue;
            Assign ay = assign(y);
            if (!ay.ok || ay.center == A.center) continue;
            out.insert(ay.center);
        }
    }
    return out;
}

EngagementRecord K2Local::engaged_with(const ClusterDescriptor& B) {
    std::optional<EdgeKey> best;
    std::optional<std::pair<Vertex, Vertex>> best_pair;
    for (Vertex b : B.members) {
        std::size_t d = deg(b);
        for (std::size_t i = 1; i <= d; ++i) {
            Vertex y = nbr(b, i);
            if (is_remote(y) || B.contains(y)) continue;
            Assign ay = assign(y);
            if (!ay.ok || !ctx_.cell_marked(ay.center)) continue;
            EdgeKey e(b, y);
            if (!best || edge_rank_less(e, *best)) {
                best = e;
                best_pair = {b, y};
            }
        }
    }
    if (!best) return {std::nullopt, std::nullopt};
    return {cluster_of(best_pair->second), best};
}

namespace {

}  // namespace

// Min-rank edge from A's members into a vertex set given by a predicate.
template <class Pred>
std::optional<EdgeKey> K2Local::min_rank_boundary(const ClusterDescriptor& A, Pred&& in_target) {
    std::optional<EdgeKey> best;
    for (Vertex a : A.members) {
        std::size_t d = deg(a);
        for (std::size_t i = 1; i <= d; ++i) {
            Vertex y = nbr(a, i);
            if (!in_target(y)) continue;
            EdgeKey e(a, y);
            if (!best || edge_rank_less(e, *best)) best = e;
        }
    }
    return best;
}

bool K2Local::query_k2(Vertex u, Vertex v, ClusteringLog* log) {
    try {
        Assign au = assign(u);
        Assign av = assign(v);
        if (!au.ok || !av.ok) throw ClusteringFailure(!au.ok ? u : v);

        if (au.center == av.center) return parent_of(u) == v || parent_of(v) == u;

        ClusterDescriptor Q = cluster_of(u);
        ClusterDescriptor W = cluster_of(v);
        const EdgeKey e(u, v);

        auto conditions = [&](const ClusterDescriptor& A, const ClusterDescriptor& B) -> bool {
            // con.0: A marked, {u,v} minimum rank in E(A, B).
            if (ctx_.cell_marked(A.center)) {
                auto m = min_rank_boundary(A, [&](Vertex y) { return B.contains(y); });
                if (m && *m == e) return true;
            }
            auto in_cell_of_B = [&](Vertex y) {
                if (is_remote(y)) return false;
                Assign ay = assign(y);
                return ay.ok && ay.center == B.center;
            };
            // con.1: A not engaged; {u,v} minimum rank in E(A, Vor(B)).
            EngagementRecord engA = engaged_with(A);
            if (!engA.engaged_with) {
                auto m = min_rank_boundary(A, in_cell_of_B);
                if (m && *m == e) return true;
            }
            // con.2: B engaged with marked C; {u,v} minimum rank in E(A, Vor(B))
            // and Vor(B) among the lowest-ranked cells in Cen(dA) ∩ Cen(dC).
            EngagementRecord engB = engaged_with(B);
            if (engB.engaged_with) {
                auto m = min_rank_boundary(A, in_cell_of_B);
                if (m && *m == e) {
                    auto cenA = adjacent_centers(A);
                    auto cenC = adjacent_centers(*engB.engaged_with);
                    std::vector<Vertex> inter;
                    for (Vertex c : cenA)
                        if (cenC.count(c)) inter.push_back(c);
                    std::sort(inter.begin(), inter.end(), [&](Vertex a, Vertex b) {
                        return cell_rank_less(a, b, ctx_.tape);
                    });
                    std::size_t limit = std::min(ctx_.con2_limit, inter.size());
                    for (std::size_t i = 0; i < limit; ++i)
                        if (inter[i] == B.center) return true;
                }
            }
            return false;
        };
        return conditions(Q, W) || conditions(W, Q);
    } catch (const ClusteringFailure&) {
        if (log) ++log->events;
        return true;  // keep the edge when clustering cannot be resolved
    }
}

bool K2Local::bs_query(Vertex u, Vertex v) {
    auto hit = h_comp_of_.find(u);
    if (hit != h_comp_of_.end()) return h_comp_edges_[hit->second].count(EdgeKey(u, v)) > 0;

    // Component of {u,v} in H (edges with a remote endpoint).
    std::map<Vertex, std::vector<Vertex>> adj;
    std::vector<Vertex> verts;
    std::set<Vertex> seen{u};
    std::deque<Vertex> queue{u};
    while (!queue.empty()) {
        Vertex x = queue.front();
        queue.pop_front();
        verts.push_back(x);
        bool x_remote = is_remote(x);
        std::size_t d = deg(x);
        for (std::size_t i = 1; i <= d; ++i) {
            Vertex y = nbr(x, i);
            if (!x_remote && !is_remote(y)) continue;  // edge not in H
            adj[x].push_back(y);
            if (seen.insert(y).second) queue.push_back(y);
        }
    }
    std::sort(verts.begin(), verts.end());
    auto edges = baswana_sen_edges(verts, adj, ctx_.k, ctx_.n, ctx_.tape);
    std::size_t id = h_comp_edges_.size();
    h_comp_edges_.push_back(std::move(edges));
    for (Vertex x : verts) h_comp_of_[x] = id;
    return h_comp_edges_[id].count(EdgeKey(u, v)) > 0;
}

bool K2Local::query_main(Vertex u, Vertex v, ClusteringLog* log) {
    if (ctx_.strict && !oracle_.adjacent(u, v)) throw NotAnEdge(u, v);
    if (is_remote(u) || is_remote(v)) return bs_query(u, v);
    return query_k2(u, v, log);
}

std::set<EdgeKey> baswana_sen_edges(const std::vector<Vertex>& vertices,
                                    const std::map<Vertex, std::vector<Vertex>>& adj,
                                    std::size_t k, std::size_t n_global, const RandomTape& tape) {
    if (k < 1) k = 1;
    const double p = std::pow(static_cast<double>(n_global > 1 ? n_global : 2),
                              -1.0 / static_cast<double>(k));
    auto sampled = [&](std::size_t round, Vertex c) {
        return static_cast<double>(tape.word("bs", std::uint64_t(round), c) >> 11) * 0x1.0p-53 < p;
    };

    std::set<EdgeKey> out;
    std::set<EdgeKey> e_cur;
    for (const auto& [x, nb] : adj)
        for (Vertex y : nb) e_cur.insert(EdgeKey(x, y));

    std::map<Vertex, std::optional<Vertex>> cluster;
    for (Vertex v : vertices) cluster[v] = v;

    auto neighbors_of = [&](Vertex v) -> const std::vector<Vertex>& {
        static const std::vector<Vertex> kEmpty;
        auto it = adj.find(v);
        return it == adj.end() ? kEmpty : it->second;
    };

    for (std::size_t round = 1; round + 1 <= k; ++round) {
        // Synchronous round: decisions read the start-of-round state; edge
        // removals and cluster moves apply afterwards.
        std::map<Vertex, std::optional<Vertex>> next_cluster = cluster;
        std::vector<EdgeKey> removals;
        for (Vertex v : vertices) {
            if (!cluster[v]) continue;
            if (sampled(round, *cluster[v])) continue;

            std::map<Vertex, EdgeKey> best_to_cluster;  // center -> min-rank edge
            for (Vertex w : neighbors_of(v)) {
                if (!e_cur.count(EdgeKey(v, w))) continue;
                if (!cluster[w] || *cluster[w] == *cluster[v]) continue;
                EdgeKey e(v, w);
                auto it = best_to_cluster.find(*cluster[w]);
                if (it == best_to_cluster.end() || edge_rank_less(e, it->second))
                    best_to_cluster.insert_or_assign(*cluster[w], e);
            }

            std::optional<Vertex> join;
            std::optional<EdgeKey> join_edge;
            for (const auto& [c, e] : best_to_cluster) {
                if (!sampled(round, c)) continue;
                if (!join_edge || edge_rank_less(e, *join_edge)) {
                    join = c;
                    join_edge = e;
                }
            }

            if (!join) {
                // No sampled cluster nearby: one edge per adjacent cluster,
                // then v retires.
                for (const auto& [c, e] : best_to_cluster) out.insert(e);
                for (Vertex w : neighbors_of(v)) removals.push_back(EdgeKey(v, w));
                next_cluster[v] = std::nullopt;
            } else {
                out.insert(*join_edge);
                next_cluster[v] = join;
                for (const auto& [c, e] : best_to_cluster) {
                    bool lower = edge_rank_less(e, *join_edge);
                    if (lower) out.insert(e);
                    if (lower || c == *join) {
                        // drop v's edges into this cluster
                        for (Vertex w : neighbors_of(v))
                            if (cluster[w] && *cluster[w] == c) removals.push_back(EdgeKey(v, w));
                    }
                }
            }
        }
        for (const auto& e : removals) e_cur.erase(e);
        cluster = std::move(next_cluster);
    }

    // Final round: every still-clustered vertex connects to each adjacent cluster.
    for (Vertex v : vertices) {
        if (!cluster[v]) continue;
        std::map<Vertex, EdgeKey> best_to_cluster;
        for (Vertex w : neighbors_of(v)) {
            if (!e_cur.count(EdgeKey(v, w))) continue;
            if (!cluster[w] || *cluster[w] == *cluster[v]) continue;
            EdgeKey e(v, w);
            auto it = best_to_cluster.find(*cluster[w]);
            if (it == best_to_cluster.end() || edge_rank_less(e, it->second))
                best_to_cluster.insert_or_assign(*cluster[w], e);
        }
        for (const auto& [c, e] : best_to_cluster) out.insert(e);
    }
    return out;
}

}  // namespace lspan
