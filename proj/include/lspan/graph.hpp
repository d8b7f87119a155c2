// graph.hpp — immutable simple undirected graph, the three-probe oracle,
// generators and edge-list I/O.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lspan {

using Vertex = std::uint32_t;

// Canonical undirected edge, lo < hi.
struct EdgeKey {
    Vertex lo;
    Vertex hi;

    EdgeKey(Vertex a, Vertex b) : lo(a < b ? a : b), hi(a < b ? b : a) {
        if (a == b) throw std::invalid_argument("EdgeKey: self-loop");
    }
    bool operator==(const EdgeKey&) const = default;
    auto operator<=>(const EdgeKey&) const = default;
};

// Lexicographic rank on canonical edges: (min id, max id).
inline bool edge_rank_less(const EdgeKey& e1, const EdgeKey& e2) {
    if (e1.lo != e2.lo) return e1.lo < e2.lo;
    return e1.hi < e2.hi;
}

class GraphView {
  public:
    // Builds from an edge list; neighbor order is first-occurrence order.
    // Rejects self-loops and duplicate edges.
    GraphView(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges);

    std::size_t n() const { return adj_.size(); }
    std::size_t m() const { return m_; }

    std::size_t degree(Vertex v) const { return adj_.at(v).size(); }
    const std::vector<Vertex>& neighbors(Vertex v) const { return adj_.at(v); }

    // 1-based neighbor access; nullopt when i > deg(v).
    std::optional<Vertex> neighbor(Vertex v, std::size_t i) const {
        const auto& nb = adj_.at(v);
        if (i < 1 || i > nb.size()) return std::nullopt;
        return nb[i - 1];
    }

    // Index of v in N(u) (1-based), nullopt when not adjacent.
    std::optional<std::size_t> index_of(Vertex u, Vertex v) const;

    bool adjacent(Vertex u, Vertex v) const { return index_of(u, v).has_value(); }

    std::vector<EdgeKey> edges() const;

  private:
    std::vector<std::vector<Vertex>> adj_;
    std::size_t m_ = 0;
};

// Per-query probe accounting. Every distinct oracle probe bumps exactly one
// counter; repeating an identical probe is free (the answer is already known).
struct ProbeLedger {
    std::uint64_t degree_probes = 0;
    std::uint64_t neighbor_probes = 0;
    std::uint64_t adjacency_probes = 0;

    std::uint64_t total() const { return degree_probes + neighbor_probes + adjacency_probes; }

    void merge(const ProbeLedger& other) {
        degree_probes += other.degree_probes;
        neighbor_probes += other.neighbor_probes;
        adjacency_probes += other.adjacency_probes;
    }
};

// The adjacency-list oracle. LCA code goes through this and nothing else,
// so the ledger is an exact count of distinct probes.
class ProbeOracle {
  public:
    ProbeOracle(const GraphView& g, ProbeLedger& ledger) : g_(g), ledger_(ledger) {}

    std::size_t degree(Vertex v) const {
        check(v);
        if (deg_seen_.insert(v).second) ++ledger_.degree_probes;
        return g_.degree(v);
    }

    std::optional<Vertex> neighbor(Vertex v, std::size_t i) const {
        check(v);
        if (nbr_seen_.insert({v, i}).second) ++ledger_.neighbor_probes;
        return g_.neighbor(v, i);
    }

    std::optional<std::size_t> adjacent(Vertex u, Vertex v) const {
        check(u);
        check(v);
        if (adj_seen_.insert({u, v}).second) ++ledger_.adjacency_probes;
        return g_.index_of(u, v);
    }

    std::size_t n() const { return g_.n(); }

  private:
    void check(Vertex v) const {
        if (v >= g_.n()) throw std::out_of_range("ProbeOracle: invalid vertex id");
    }

    const GraphView& g_;
    ProbeLedger& ledger_;
    mutable std::set<Vertex> deg_seen_;
    mutable std::set<std::pair<Vertex, std::size_t>> nbr_seen_;
    mutable std::set<std::pair<Vertex, Vertex>> adj_seen_;
};

// Edge-list text format: "n m" then m lines "u v"; '#' starts a comment.
GraphView load_graph(std::istream& in);
GraphView load_graph_file(const std::string& path);
void save_graph(std::ostream& out, const GraphView& g);
void save_graph_file(const std::string& path, const GraphView& g);

struct ParseError : std::runtime_error {
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_no(line) {}
    std::size_t line_no;
};

// Generators. All deterministic in (params, seed) and simple by construction.
GraphView gen_gnp(std::size_t n, double p, std::uint64_t seed);
// Random graph with all degrees close to `degree` (configuration-style with
// rejection of duplicates/self-loops).
GraphView gen_regularish(std::size_t n, std::size_t degree, std::uint64_t seed);
// Few high-degree hubs plus a medium band and a sparse background, to
// exercise heavy/medium/light case splits.
GraphView gen_planted_hubs(std::size_t n, std::size_t hubs, double p_background,
                           std::uint64_t seed);

}  // namespace lspan
