// verify.hpp — global reference constructions, stretch/connectivity/cluster
// checkers, and full-scan drivers that realize consistency as an edge set.
#pragma once

#include <optional>
#include <set>
#include <vector>

#include "lspan/graph.hpp"
#include "lspan/spanner3.hpp"
#include "lspan/spanner5.hpp"
#include "lspan/spanner_k2.hpp"

namespace lspan {

enum class Algo { spanner3, spanner5, k2, bs };

std::optional<Algo> parse_algo(const std::string& name);  // "3"|"5"|"k2"|"bs"
std::string algo_name(Algo a);

// Full scan: query every edge once through the probe oracle.
struct BuildResult {
    std::set<EdgeKey> edges;
    std::uint64_t max_probes = 0;   // per-query ledger delta (shared caches for k2/bs)
    double mean_probes = 0.0;
    ProbeLedger ledger;             // aggregate across all queries
    std::uint64_t clustering_failures = 0;
};

BuildResult build_spanner(Algo algo, const GraphView& g, std::uint64_t seed,
                          const AlgParams& params = {});

// Per-query probe cost with cold caches, over a sample of edges.
struct ProbeStats {
    std::uint64_t max_probes = 0;
    double mean_probes = 0.0;
    std::size_t sampled = 0;
    std::size_t yes_count = 0;
};

ProbeStats sample_probe_stats(Algo algo, const GraphView& g, std::uint64_t seed,
                              const AlgParams& params, std::size_t sample_size,
                              std::uint64_t sample_seed);

// Independent whole-graph replays; the equivalence oracles for the LCAs.
std::set<EdgeKey> build_spanner3_reference(const GraphView& g, const Spanner3Context& ctx);

// Global clustering structure of the k^2 algorithm.
struct K2Structure {
    std::vector<char> remote;              // per vertex
    static constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
    std::vector<std::size_t> dist;         // to nearest center; kUnassigned if none/remote
    std::vector<Vertex> center;            // valid where dist != kUnassigned
    std::vector<Vertex> parent;            // BFS parent; center maps to itself
    std::vector<Vertex> failures;          // non-remote vertices with no reachable center
    std::vector<ClusterDescriptor> clusters;
    std::vector<std::size_t> cluster_of;   // vertex -> index into clusters, or kUnassigned
};

K2Structure analyze_k2(const GraphView& g, const SpannerK2Context& ctx);

std::set<EdgeKey> build_spanner_k2_reference(const GraphView& g, const SpannerK2Context& ctx,
                                             ClusteringLog* log = nullptr);

// Whole-graph Baswana-Sen (per connected component), the reference for Algo::bs.
std::set<EdgeKey> build_spanner_bs_reference(const GraphView& g, std::size_t k,
                                             std::uint64_t seed);

struct StretchReport {
    std::size_t removed_edges = 0;
    std::size_t max_stretch = 0;  // over removed edges; unreachable counts as bound+1
    std::size_t unreachable = 0;
    std::vector<std::pair<EdgeKey, std::size_t>> offenders;  // worst, at most 10
    std::size_t bound = 0;
    bool pass = false;  // max_stretch <= bound
    std::uint64_t clustering_failures = 0;  // filled by callers that have a log
};

// BFS in the spanner from each removed edge's endpoint, truncated at `bound`.
StretchReport check_stretch(const GraphView& g, const std::set<EdgeKey>& spanner,
                            std::size_t bound);

// True iff the spanner has the same connected components as g.
bool check_connectivity(const GraphView& g, const std::set<EdgeKey>& spanner);

// Voronoi-cell contraction of g and of the spanner (deduplicated simple views).
struct ContractedPair {
    std::vector<Vertex> cell_centers;  // sorted; contracted vertex i = cell of centers[i]
    GraphView g_vor{0, {}};
    GraphView spanner_vor{0, {}};
};

ContractedPair contract_voronoi(const GraphView& g, const K2Structure& s,
                                const std::set<EdgeKey>& spanner);

struct ClusterInvariantReport {
    bool partition_ok = false;      // clusters partition each cell's vertices
    bool sizes_ok = false;          // non-singleton clusters have <= L members
    bool count_ok = false;          // cluster count <= |S| + 4nk log2(Delta) / L
    std::size_t cluster_count = 0;
    double count_bound = 0.0;
    std::size_t failure_vertices = 0;
    bool pass() const { return partition_ok && sizes_ok && count_ok; }
};

ClusterInvariantReport check_cluster_invariants(const GraphView& g, const SpannerK2Context& ctx);

}  // namespace lspan
