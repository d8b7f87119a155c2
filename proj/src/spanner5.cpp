#include "lspan/spanner5.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lspan {

namespace {

std::size_t scaled_size(double base, std::size_t n) {
    auto sz = static_cast<std::size_t>(std::ceil(base));
    return std::min(sz < 1 ? 1 : sz, n);
}

// Orientation order: deg first, id breaks ties.
bool ord_higher(Vertex u, std::size_t du, Vertex v, std::size_t dv) {
    return du > dv || (du == dv && u > v);
}

// Replays the representative draw: min-id sampled neighbor with heavy degree.
template <class NeighborFn, class DegreeFn>
std::optional<Vertex> representative_from(Vertex v, std::size_t deg, const Spanner5Context& ctx,
                                          NeighborFn&& nth_neighbor, DegreeFn&& degree_of) {
    auto draws = vertex_sample(v, deg, ctx.rep_count, ctx.tape, "rep");
    std::optional<Vertex> best;
    for (std::size_t idx : draws) {
        Vertex r = nth_neighbor(idx);
        if (best && *best <= r) continue;  // id can only improve
        if (degree_of(r) >= ctx.cut_hi) best = r;
    }
    return best;
}

}  // namespace

Spanner5Context::Spanner5Context(std::size_t n_, std::uint64_t seed, const AlgParams& params)
    : n(n_),
      cut_lo(static_cast<std::size_t>(std::floor(std::cbrt(static_cast<double>(n_)) + 1e-9))),
      cut_hi(static_cast<std::size_t>(
          std::ceil(std::pow(static_cast<double>(n_), 2.0 / 3.0) - 1e-9))),
      rep_count(static_cast<std::size_t>(std::ceil(params.c_rep_sample * log2n(n_)))),
      block(cut_lo < 1 ? 1 : cut_lo),
      tape(seed),
      heavy_family(n_, scaled_size(params.c_centers * std::cbrt(static_cast<double>(n_)) * log2n(n_), n_),
                   ceil_log2(std::cbrt(static_cast<double>(n_ > 1 ? n_ : 2))), tape, "S1"),
      light_family(n_, scaled_size(params.c_centers * std::pow(static_cast<double>(n_), 2.0 / 3.0) * log2n(n_), n_),
                   ceil_log2(std::pow(static_cast<double>(n_ > 1 ? n_ : 2), 2.0 / 3.0)), tape, "S2") {
    if (n == 0) throw std::invalid_argument("Spanner5Context: empty graph");
    if (cut_lo < 1) cut_lo = 1;
    if (cut_hi <= cut_lo) cut_hi = cut_lo + 1;
    if (rep_count < 1) rep_count = 1;
}

const std::vector<Vertex>& Spanner5Context::level_set1(std::size_t c) const {
    static const std::vector<Vertex> kEmpty;
    if (c < 1 || c > heavy_family.levels()) return kEmpty;
    return heavy_family.set(c);
}

const std::vector<Vertex>& Spanner5Context::level_set2(std::size_t c) const {
    static const std::vector<Vertex> kEmpty;
    if (c < 1 || c > light_family.levels()) return kEmpty;
    return light_family.set(c);
}

std::optional<Vertex> representative(Vertex v, const Spanner5Context& ctx,
                                     const ProbeOracle& oracle) {
    std::size_t deg = oracle.degree(v);
    if (!ctx.is_medium_deg(deg))
        throw std::logic_error("representative: vertex is not medium");
    return representative_from(
        v, deg, ctx, [&](std::size_t i) { return oracle.neighbor(v, i).value(); },
        [&](Vertex r) { return oracle.degree(r); });
}

VertexRole role_of(Vertex v, const Spanner5Context& ctx, const ProbeOracle& oracle) {
    std::size_t deg = oracle.degree(v);
    if (ctx.is_light_deg(deg)) return {VertexRole::Kind::light, std::nullopt};
    if (ctx.is_heavy_deg(deg)) return {VertexRole::Kind::heavy, std::nullopt};
    auto rep = representative(v, ctx, oracle);
    if (rep) return {VertexRole::Kind::medium_with_representative, rep};
    return {VertexRole::Kind::bad, std::nullopt};
}

std::vector<Vertex> heavy_centers(Vertex v, const Spanner5Context& ctx,
                                  const ProbeOracle& oracle) {
    std::size_t deg = oracle.degree(v);
    if (!ctx.is_heavy_deg(deg)) throw std::logic_error("heavy_centers: vertex is not heavy");
    std::size_t c = ctx.heavy_class(deg);
    std::vector<Vertex> out;
    for (Vertex s : ctx.level_set1(c))
        if (oracle.adjacent(v, s)) out.push_back(s);
    return out;
}

std::vector<Vertex> light_centers(Vertex v, const Spanner5Context& ctx,
                                  const ProbeOracle& oracle) {
    std::size_t deg = oracle.degree(v);
    if (!ctx.is_medium_deg(deg)) throw std::logic_error("light_centers: vertex is not medium");
    std::size_t c = class_of(deg, ctx.cut_lo);
    std::vector<Vertex> out;
    for (std::size_t j = 1; j <= deg; ++j) {
        Vertex y = oracle.neighbor(v, j).value();
        if (ctx.is_center2(c, y)) out.push_back(y);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Heavy-cluster membership of y: y joined (s, c) via step 2a or 2b.
bool member5(Vertex y, const ClusterId& C, const Spanner5Context& ctx, const ProbeOracle& oracle) {
    std::size_t dy = oracle.degree(y);
    if (ctx.is_heavy_deg(dy))
        return ctx.heavy_class(dy) == C.level && oracle.adjacent(y, C.center).has_value();
    if (ctx.is_medium_deg(dy)) {
        auto r = representative(y, ctx, oracle);
        if (!r) return false;
        std::size_t dr = oracle.degree(*r);
        return ctx.heavy_class(dr) == C.level && oracle.adjacent(*r, C.center).has_value();
    }
    return false;
}

// Heavy clusters that w belongs to (directly or via its representative).
std::vector<ClusterId> heavy_clusters_of(Vertex w, const Spanner5Context& ctx,
                                         const ProbeOracle& oracle) {
    std::size_t dw = oracle.degree(w);
    std::vector<ClusterId> out;
    Vertex anchor;
    if (ctx.is_heavy_deg(dw)) {
        anchor = w;
    } else if (ctx.is_medium_deg(dw)) {
        auto r = representative(w, ctx, oracle);
        if (!r) return out;
        anchor = *r;
    } else {
        return out;
    }
    std::size_t c = ctx.heavy_class(oracle.degree(anchor));
    for (Vertex s : ctx.level_set1(c))
        if (oracle.adjacent(anchor, s)) out.push_back({s, c});
    return out;
}

// Ordered members of light cluster (s, c): neighbors of s that are medium,
// class c w.r.t. cut_lo, and have no representative; N(s) order.
std::vector<Vertex> light_cluster_members(Vertex s, std::size_t c, const Spanner5Context& ctx,
                                          const ProbeOracle& oracle) {
    std::size_t ds = oracle.degree(s);
    std::vector<Vertex> out;
    for (std::size_t j = 1; j <= ds; ++j) {
        Vertex y = oracle.neighbor(s, j).value();
        std::size_t dy = oracle.degree(y);
        if (!ctx.is_medium_deg(dy)) continue;
        if (class_of(dy, ctx.cut_lo) != c) continue;
        if (representative(y, ctx, oracle)) continue;
        out.push_back(y);
    }
    return out;
}

// Would global step 4 emit {v, w} for cluster C? Requires w in C, w first
// member of C in its bucket of N(v), and some neighbor of v above v in the
// orientation order belonging to C (the pair (v, C) must get processed).
bool step4_hit(Vertex v, std::size_t dv, Vertex w, std::size_t dw, const ClusterId& C,
               const Spanner5Context& ctx, const ProbeOracle& oracle) {
    std::size_t i = oracle.adjacent(v, w).value();
    std::size_t b = bucket_of(i, ctx.cut_hi);
    for (std::size_t j = (b - 1) * ctx.cut_hi + 1; j < i; ++j) {
        Vertex y = oracle.neighbor(v, j).value();
        // an earlier member owns this bucket; later slots cannot change that
        if (member5(y, C, ctx, oracle)) return false;
    }
    if (ord_higher(w, dw, v, dv)) return true;  // the queried edge itself triggers (v, C)
    for (std::size_t j = 1; j <= dv; ++j) {
        Vertex x = oracle.neighbor(v, j).value();
        std::size_t dx = oracle.degree(x);
        if (!ord_higher(x, dx, v, dv)) continue;
        if (member5(x, C, ctx, oracle)) return true;
    }
    return false;
}

EdgeKey min_rank_between_blocks(const std::vector<Vertex>& blk_a, const std::vector<Vertex>& blk_b,
                                const ProbeOracle& oracle, bool& found) {
    found = false;
    EdgeKey best(0, 1);
    for (Vertex x : blk_a) {
        for (Vertex y : blk_b) {
            if (x == y) continue;
            if (!oracle.adjacent(x, y)) continue;
            EdgeKey e(x, y);
            if (!found || edge_rank_less(e, best)) {
                best = e;
                found = true;
            }
        }
    }
    return best;
}

std::vector<Vertex> block_slice(const std::vector<Vertex>& members, std::size_t block_idx,
                                std::size_t block) {
    std::size_t lo = (block_idx - 1) * block;
    std::size_t hi = std::min(lo + block, members.size());
    if (lo >= members.size()) return {};
    return {members.begin() + lo, members.begin() + hi};
}

}  // namespace

std::size_t light_subset_index(Vertex s, std::size_t c, Vertex w, const Spanner5Context& ctx,
                               const ProbeOracle& oracle) {
    auto members = light_cluster_members(s, c, ctx, oracle);
    auto it = std::find(members.begin(), members.end(), w);
    if (it == members.end())
        throw std::logic_error("light_subset_index: vertex not in cluster");
    std::size_t rank = static_cast<std::size_t>(it - members.begin()) + 1;
    return (rank + ctx.block - 1) / ctx.block;
}

bool query5(Vertex u, Vertex v, const Spanner5Context& ctx, const ProbeOracle& oracle,
            ClusteringLog* log) {
    if (ctx.strict && !oracle.adjacent(u, v)) throw NotAnEdge(u, v);

    std::size_t du = oracle.degree(u);
    std::size_t dv = oracle.degree(v);

    // Step 1: edges at light vertices.
    if (ctx.is_light_deg(du) || ctx.is_light_deg(dv)) return true;

    // Step 2a: heavy-center edges.
    if (ctx.is_heavy_deg(du) && ctx.is_center1(ctx.heavy_class(du), v)) return true;
    if (ctx.is_heavy_deg(dv) && ctx.is_center1(ctx.heavy_class(dv), u)) return true;

    // Step 2b: representative edges.
    std::optional<Vertex> rep_u, rep_v;
    if (ctx.is_medium_deg(du)) rep_u = representative(u, ctx, oracle);
    if (ctx.is_medium_deg(dv)) rep_v = representative(v, ctx, oracle);
    if (rep_u && *rep_u == v) return true;
    if (rep_v && *rep_v == u) return true;

    const bool bad_u = ctx.is_medium_deg(du) && !rep_u;
    const bool bad_v = ctx.is_medium_deg(dv) && !rep_v;

    // Step 3a: light-center edges.
    if (bad_u && ctx.is_center2(class_of(du, ctx.cut_lo), v)) return true;
    if (bad_v && ctx.is_center2(class_of(dv, ctx.cut_lo), u)) return true;

    // Fallback: a bad vertex with no light-center keeps all its edges.
    std::vector<Vertex> lc_u, lc_v;
    if (bad_u) lc_u = light_centers(u, ctx, oracle);
    if (bad_v) lc_v = light_centers(v, ctx, oracle);
    if (bad_u && lc_u.empty()) {
        if (log) ++log->events;
        return true;
    }
    if (bad_v && lc_v.empty()) {
        if (log) ++log->events;
        return true;
    }

    // Step 4: first-in-bucket connections into heavy clusters, both orientations.
    {
        auto cw_v = heavy_clusters_of(v, ctx, oracle);
        for (const auto& C : cw_v)
            if (step4_hit(u, du, v, dv, C, ctx, oracle)) return true;
        auto cw_u = heavy_clusters_of(u, ctx, oracle);
        for (const auto& C : cw_u)
            if (step4_hit(v, dv, u, du, C, ctx, oracle)) return true;
    }

    // Step 5: minimum-rank edges between blocks of two light clusters.
    if (bad_u && bad_v) {
        std::size_t cu = class_of(du, ctx.cut_lo);
        std::size_t cv = class_of(dv, ctx.cut_lo);
        for (Vertex su : lc_u) {
            for (Vertex sv : lc_v) {
                ClusterId Cu{su, cu}, Cv{sv, cv};
                if (Cu == Cv) continue;
                auto mem_u = light_cluster_members(su, cu, ctx, oracle);
                auto mem_v = light_cluster_members(sv, cv, ctx, oracle);
                auto pos_u = std::find(mem_u.begin(), mem_u.end(), u);
                auto pos_v = std::find(mem_v.begin(), mem_v.end(), v);
                if (pos_u == mem_u.end() || pos_v == mem_v.end()) continue;
                std::size_t bi = (static_cast<std::size_t>(pos_u - mem_u.begin()) / ctx.block) + 1;
                std::size_t bj = (static_cast<std::size_t>(pos_v - mem_v.begin()) / ctx.block) + 1;
                bool found = false;
                EdgeKey best = min_rank_between_blocks(block_slice(mem_u, bi, ctx.block),
                                                       block_slice(mem_v, bj, ctx.block), oracle,
                                                       found);
                if (found && best == EdgeKey(u, v)) return true;
            }
        }
    }
    return false;
}

std::set<EdgeKey> build_spanner5_global(const GraphView& g, const Spanner5Context& ctx,
                                        ClusteringLog* log) {
    const std::size_t n = g.n();
    std::set<EdgeKey> out;
    std::vector<std::size_t> deg(n);
    for (Vertex v = 0; v < n; ++v) deg[v] = g.degree(v);

    // Step 1.
    for (Vertex v = 0; v < n; ++v)
        if (ctx.is_light_deg(deg[v]))
            for (Vertex w : g.neighbors(v)) out.insert(EdgeKey(v, w));

    // Representatives for all medium vertices, replaying the shared tape.
    std::vector<std::optional<Vertex>> rep(n);
    for (Vertex v = 0; v < n; ++v) {
        if (!ctx.is_medium_deg(deg[v])) continue;
        rep[v] = representative_from(
            v, deg[v], ctx, [&](std::size_t i) { return g.neighbors(v)[i - 1]; },
            [&](Vertex r) { return deg[r]; });
    }

    // Steps 2a/2b: heavy clusters and who belongs to them.
    std::vector<std::vector<ClusterId>> clusters_of(n);
    for (Vertex v = 0; v < n; ++v) {
        if (!ctx.is_heavy_deg(deg[v])) continue;
        std::size_t c = ctx.heavy_class(deg[v]);
        for (Vertex s : ctx.level_set1(c)) {
            if (g.adjacent(v, s)) {
                clusters_of[v].push_back({s, c});
                out.insert(EdgeKey(s, v));
            }
        }
        if (clusters_of[v].empty() && log) ++log->events;  // heavy vertex missed by centers
    }
    for (Vertex v = 0; v < n; ++v) {
        if (!ctx.is_medium_deg(deg[v]) || !rep[v]) continue;
        out.insert(EdgeKey(v, *rep[v]));
        clusters_of[v] = clusters_of[*rep[v]];
    }

    // Step 3a: light clusters for bad vertices, with the no-center fallback.
    std::vector<std::vector<ClusterId>> light_clusters_of(n);
    for (Vertex v = 0; v < n; ++v) {
        if (!ctx.is_medium_deg(deg[v]) || rep[v]) continue;
        std::size_t c = class_of(deg[v], ctx.cut_lo);
        for (Vertex s : g.neighbors(v))
            if (ctx.is_center2(c, s)) {
                light_clusters_of[v].push_back({s, c});
                out.insert(EdgeKey(s, v));
            }
        if (light_clusters_of[v].empty()) {
            if (log) ++log->events;
            for (Vertex w : g.neighbors(v)) out.insert(EdgeKey(v, w));
        }
    }

    auto member = [&](Vertex y, const ClusterId& C) {
        const auto& cs = clusters_of[y];
        return std::find(cs.begin(), cs.end(), C) != cs.end();
    };

    // Step 4.
    std::set<std::pair<Vertex, ClusterId>> processed4;
    for (const auto& e : g.edges()) {
        Vertex hi = e.hi, lo = e.lo;
        if (!ord_higher(hi, deg[hi], lo, deg[lo])) std::swap(hi, lo);
        for (const auto& C : clusters_of[hi]) {
            if (!processed4.insert({lo, C}).second) continue;
            const auto& nb = g.neighbors(lo);
            std::size_t cur_bucket = 0;
            bool open = false;
            for (std::size_t j = 1; j <= nb.size(); ++j) {
                std::size_t b = bucket_of(j, ctx.cut_hi);
                if (b != cur_bucket) {
                    cur_bucket = b;
                    open = true;
                }
                if (open && member(nb[j - 1], C)) {
                    out.insert(EdgeKey(lo, nb[j - 1]));
                    open = false;
                }
            }
        }
    }

    // Step 5.
    auto members_of_light = [&](const ClusterId& C) {
        std::vector<Vertex> ms;
        for (Vertex y : g.neighbors(C.center)) {
            if (!ctx.is_medium_deg(deg[y]) || rep[y]) continue;
            if (class_of(deg[y], ctx.cut_lo) != C.level) continue;
            ms.push_back(y);
        }
        return ms;
    };
    std::set<std::pair<ClusterId, ClusterId>> processed5;
    for (const auto& e : g.edges()) {
        Vertex a = e.lo, b = e.hi;
        if (light_clusters_of[a].empty() || light_clusters_of[b].empty()) continue;
        for (const auto& Ca : light_clusters_of[a]) {
            for (const auto& Cb : light_clusters_of[b]) {
                if (Ca == Cb) continue;
                auto key = Ca < Cb ? std::pair{Ca, Cb} : std::pair{Cb, Ca};
                if (!processed5.insert(key).second) continue;
                auto mu = members_of_light(key.first);
                auto mv = members_of_light(key.second);
                std::size_t nb_u = (mu.size() + ctx.block - 1) / ctx.block;
                std::size_t nb_v = (mv.size() + ctx.block - 1) / ctx.block;
                for (std::size_t i = 1; i <= nb_u; ++i) {
                    auto blk_a = block_slice(mu, i, ctx.block);
                    for (std::size_t j = 1; j <= nb_v; ++j) {
                        auto blk_b = block_slice(mv, j, ctx.block);
                        bool found = false;
                        EdgeKey best(0, 1);
                        for (Vertex x : blk_a)
                            for (Vertex y : blk_b) {
                                if (x == y || !g.adjacent(x, y)) continue;
                                EdgeKey cand(x, y);
                                if (!found || edge_rank_less(cand, best)) {
                                    best = cand;
                                    found = true;
                                }
                            }
                        if (found) out.insert(best);
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace lspan
