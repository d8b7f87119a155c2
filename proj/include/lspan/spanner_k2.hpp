// spanner_k2.hpp — the O(k^2)-spanner LCA: Voronoi partition over random
// centers, cluster reconstruction with auxiliary trees, marked/engaged
// cluster logic, remote-vertex detection, and the Baswana-Sen fallback.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "lspan/graph.hpp"
#include "lspan/random_tape.hpp"
#include "lspan/spanner3.hpp"  // NotAnEdge
#include "lspan/spanner5.hpp"  // ClusteringLog

namespace lspan {

struct SpannerK2Context {
    std::size_t n;
    std::size_t k;           // capped at ceil(log2 n)
    std::size_t L;           // ceil(c_L * n^{1/3} * log2 n), cluster-size cap
    double p_mark;           // n^{-1/3}
    std::size_t con2_limit;  // ceil(n^{1/k} * log2 n)
    RandomTape tape;
    CenterFamily centers;  // single level, |S| = ceil(n^{2/3} log2 n), label "S"
    bool strict = false;

    SpannerK2Context(std::size_t n, std::uint64_t seed, const AlgParams& params = {});

    bool is_center(Vertex v) const { return centers.contains(1, v); }
    const std::vector<Vertex>& center_set() const { return centers.set(1); }
    bool cell_marked(Vertex center) const { return is_marked(center, tape, p_mark); }
};

// Raised when a non-remote vertex's component holds no center; callers apply
// the keep-all-incident-edges fallback.
struct ClusteringFailure : std::runtime_error {
    explicit ClusteringFailure(Vertex v)
        : std::runtime_error("no center reachable from vertex " + std::to_string(v)) {}
};

struct VoronoiAssignment {
    Vertex v;
    Vertex center;
    std::size_t dist;
    Vertex parent;  // min-id neighbor one step closer to the center; self for centers
};

struct ClusterDescriptor {
    enum class Kind { whole_cell, singleton, subtree_group };
    Kind kind;
    Vertex center;                 // c(.) of the owning Voronoi cell
    std::vector<Vertex> members;   // sorted
    Vertex anchor_root = 0;        // subtree_group: heavy BFS parent r
    std::size_t anchor_level = 0;  // subtree_group: aux node address in B_r
    std::size_t anchor_pos = 0;

    Vertex min_member() const { return members.front(); }
    // Canonical identity so independent reconstructions compare equal.
    auto key() const { return std::tuple(center, static_cast<int>(kind), min_member()); }
    bool contains(Vertex v) const;
};

struct EngagementRecord {
    std::optional<ClusterDescriptor> engaged_with;
    std::optional<EdgeKey> witness;  // min-rank edge from the cluster into marked clusters
};

// Per-query (or per-scan) local computation state: the probe oracle plus
// pure-function memo caches over it.
class K2Local {
  public:
    K2Local(const SpannerK2Context& ctx, const GraphView& g, ProbeLedger& ledger)
        : ctx_(ctx), oracle_(g, ledger) {}

    const SpannerK2Context& ctx() const { return ctx_; }
    const ProbeOracle& oracle() const { return oracle_; }

    bool is_remote(Vertex v);
    VoronoiAssignment find_center(Vertex v);  // throws ClusteringFailure
    bool subtree_heavy(Vertex v);
    // z(u) for a light BFS child u of heavy r: (level, pos) in B_r plus D(z).
    ClusterDescriptor aux_locate(Vertex u, Vertex r);
    ClusterDescriptor cluster_of(Vertex v);
    std::set<Vertex> adjacent_centers(const ClusterDescriptor& A);
    EngagementRecord engaged_with(const ClusterDescriptor& B);

    bool query_k2(Vertex u, Vertex v, ClusteringLog* log = nullptr);
    bool bs_query(Vertex u, Vertex v);
    bool query_main(Vertex u, Vertex v, ClusteringLog* log = nullptr);

  private:
    struct Assign {
        Vertex center;
        std::size_t dist;
        bool ok;
    };

    // Cached probes: repeated accesses to the same list entry are free, so the
    // ledger counts distinct probes per query.
    std::size_t deg(Vertex v);
    Vertex nbr(Vertex v, std::size_t i);  // 1-based, i <= deg(v)

    template <class Pred>
    std::optional<EdgeKey> min_rank_boundary(const ClusterDescriptor& A, Pred&& in_target);

    Assign assign(Vertex v);
    Vertex parent_of(Vertex v);
    std::size_t capped_subtree(Vertex v);               // min(|T(v)|, L+1)
    std::vector<Vertex> collect_subtree(Vertex v);      // |T(v)| <= L
    std::vector<Vertex> children_of(Vertex v);
    // Cell members from the center, capped at L+1 vertices.
    std::vector<Vertex> explore_cell(Vertex center);

    const SpannerK2Context& ctx_;
    ProbeOracle oracle_;
    std::unordered_map<Vertex, std::size_t> deg_cache_;
    std::unordered_map<Vertex, std::vector<Vertex>> nbr_cache_;  // fetched prefix of N(v)
    // Zero-probe non-remoteness witness: truncated BFS over cached adjacency
    // prefixes only, a lower bound on |Γ_k(v)|.
    bool cached_nonremote(Vertex v) const;

    // A completed non-remote exploration: L vertices seen, each recorded with
    // its depth, all within `radius` of the root.
    struct RemoteBall {
        std::size_t radius;
        std::unordered_map<Vertex, std::size_t> depth;
    };
    std::unordered_map<Vertex, bool> remote_memo_;
    std::vector<RemoteBall> remote_balls_;
    std::unordered_map<Vertex, Assign> assign_memo_;
    std::unordered_map<Vertex, Vertex> parent_memo_;
    std::unordered_map<Vertex, std::size_t> subtree_memo_;
    std::unordered_map<Vertex, std::vector<Vertex>> cell_memo_;
    std::unordered_map<Vertex, std::size_t> h_comp_of_;  // vertex -> H-component id
    std::vector<std::set<EdgeKey>> h_comp_edges_;
};

// Deterministic Baswana-Sen on an explicit (sub)graph; randomness from
// (tape, "bs", round, cluster center). Shared by the local simulation and
// the global reference.
std::set<EdgeKey> baswana_sen_edges(const std::vector<Vertex>& vertices,
                                    const std::map<Vertex, std::vector<Vertex>>& adj,
                                    std::size_t k, std::size_t n_global, const RandomTape& tape);

}  // namespace lspan
