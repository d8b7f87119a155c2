// spanner3.hpp — LCA for 3-spanners: per-edge membership with ~sqrt(n) probes.
#pragma once

#include <memory>
#include <vector>

#include "lspan/graph.hpp"
#include "lspan/random_tape.hpp"

namespace lspan {

struct NotAnEdge : std::runtime_error {
    NotAnEdge(Vertex u, Vertex v)
        : std::runtime_error("not an edge: {" + std::to_string(u) + "," + std::to_string(v) + "}") {}
};

struct Spanner3Context {
    std::size_t n;
    std::size_t threshold;  // floor(sqrt(n)); heavy iff deg > threshold
    RandomTape tape;
    CenterFamily family;  // t = ceil(log2 sqrt(n)) levels, x_1 = ceil(sqrt(n) log2 n)
    bool strict = false;

    Spanner3Context(std::size_t n, std::uint64_t seed, const AlgParams& params = {});

    // S_c for class c; levels past the family are empty.
    const std::vector<Vertex>& level_set(std::size_t c) const;
    bool is_center(std::size_t c, Vertex v) const {
        return c <= family.levels() && family.contains(c, v);
    }
};

// S_c intersected with N(u), one adjacency probe per member of S_c.
std::vector<Vertex> centers3_of(Vertex u, std::size_t c, const Spanner3Context& ctx,
                                const ProbeOracle& oracle);

// Cluster membership: y is heavy, in class `level`, and adjacent to center x.
bool in_cluster3(Vertex y, Vertex x, std::size_t level, const Spanner3Context& ctx,
                 const ProbeOracle& oracle);

// Per-edge membership answer; pure in (u, v, seed).
bool query3(Vertex u, Vertex v, const Spanner3Context& ctx, const ProbeOracle& oracle);

}  // namespace lspan
