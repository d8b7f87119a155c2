// spanner5.hpp — 5-spanner construction: the global reference algorithm and
// its local (probe-oracle) implementation, sharing one deterministic tape.
#pragma once

#include <optional>
#include <set>
#include <vector>

#include "lspan/graph.hpp"
#include "lspan/random_tape.hpp"
#include "lspan/spanner3.hpp"  // NotAnEdge

namespace lspan {

// Counts clustering-failure events (vertices the random clustering missed).
struct ClusteringLog {
    std::uint64_t events = 0;
};

struct Spanner5Context {
    std::size_t n;
    std::size_t cut_lo;     // floor(n^{1/3}); light iff deg <= cut_lo
    std::size_t cut_hi;     // ceil(n^{2/3}); heavy iff deg >= cut_hi
    std::size_t rep_count;  // ceil(3 log2 n) sampled neighbors for representatives
    std::size_t block;      // light-cluster subset size, floor(n^{1/3})
    RandomTape tape;
    CenterFamily heavy_family;  // "S1": a = ceil(log2 n^{1/3}) levels, y_1 = ceil(n^{1/3} log2 n)
    CenterFamily light_family;  // "S2": b = ceil(log2 n^{2/3}) levels, x_1 = ceil(n^{2/3} log2 n)
    bool strict = false;

    Spanner5Context(std::size_t n, std::uint64_t seed, const AlgParams& params = {});

    bool is_light_deg(std::size_t deg) const { return deg <= cut_lo; }
    bool is_heavy_deg(std::size_t deg) const { return deg >= cut_hi; }
    bool is_medium_deg(std::size_t deg) const { return deg > cut_lo && deg < cut_hi; }

    // Class of a heavy degree w.r.t. cut_hi; the boundary degree cut_hi itself
    // (below the classed range, which starts at cut_hi + 1) closes into class 1.
    std::size_t heavy_class(std::size_t deg) const {
        return class_of(deg > cut_hi ? deg : cut_hi + 1, cut_hi);
    }

    bool is_center1(std::size_t c, Vertex v) const {
        return c <= heavy_family.levels() && heavy_family.contains(c, v);
    }
    bool is_center2(std::size_t c, Vertex v) const {
        return c <= light_family.levels() && light_family.contains(c, v);
    }
    const std::vector<Vertex>& level_set1(std::size_t c) const;
    const std::vector<Vertex>& level_set2(std::size_t c) const;
};

struct VertexRole {
    enum class Kind { light, heavy, medium_with_representative, bad };
    Kind kind;
    std::optional<Vertex> representative;
};

// Heavy cluster = (center s, class level c) with s in S^1_c; light cluster
// likewise over S^2. Members are the vertices that joined; the center itself
// is not a member.
struct ClusterId {
    Vertex center;
    std::size_t level;
    auto operator<=>(const ClusterId&) const = default;
};

// Min-id sampled neighbor of medium v with heavy degree, or none.
std::optional<Vertex> representative(Vertex v, const Spanner5Context& ctx,
                                     const ProbeOracle& oracle);

VertexRole role_of(Vertex v, const Spanner5Context& ctx, const ProbeOracle& oracle);

// N(v) ∩ S^1_c for heavy v, one adjacency probe per candidate center.
std::vector<Vertex> heavy_centers(Vertex v, const Spanner5Context& ctx,
                                  const ProbeOracle& oracle);

// N(v) ∩ S^2_c for bad v, by enumerating N(v) against the materialized set.
std::vector<Vertex> light_centers(Vertex v, const Spanner5Context& ctx,
                                  const ProbeOracle& oracle);

// 1-based ordinal of w's block among the members of light cluster (s, c),
// ordered by index in N(s) and cut into blocks of `block` vertices.
std::size_t light_subset_index(Vertex s, std::size_t c, Vertex w, const Spanner5Context& ctx,
                               const ProbeOracle& oracle);

// Per-edge membership; equals build_spanner5_global membership under the same seed.
bool query5(Vertex u, Vertex v, const Spanner5Context& ctx, const ProbeOracle& oracle,
            ClusteringLog* log = nullptr);

// Literal whole-graph execution of the global algorithm; the equivalence
// reference for query5.
std::set<EdgeKey> build_spanner5_global(const GraphView& g, const Spanner5Context& ctx,
                                        ClusteringLog* log = nullptr);

}  // namespace lspan
