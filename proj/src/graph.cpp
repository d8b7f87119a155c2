#include "lspan/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "lspan/random_tape.hpp"

namespace lspan {

GraphView::GraphView(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
    adj_.assign(n, {});
    std::set<EdgeKey> seen;
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw std::invalid_argument("GraphView: vertex id out of range");
        if (u == v) throw std::invalid_argument("GraphView: self-loop");
        if (!seen.insert(EdgeKey(u, v)).second)
            throw std::invalid_argument("GraphView: duplicate edge");
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    m_ = edges.size();
}

std::optional<std::size_t> GraphView::index_of(Vertex u, Vertex v) const {
    const auto& nb = adj_.at(u);
    for (std::size_t i = 0; i < nb.size(); ++i)
        if (nb[i] == v) return i + 1;
    return std::nullopt;
}

std::vector<EdgeKey> GraphView::edges() const {
    std::vector<EdgeKey> out;
    out.reserve(m_);
    for (Vertex u = 0; u < adj_.size(); ++u)
        for (Vertex v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    std::sort(out.begin(), out.end());
    return out;
}

GraphView load_graph(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t n = 0, m = 0;
    bool header = false;
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::set<EdgeKey> seen;

    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (!header) {
            if (!(ls >> n >> m)) {
                std::string rest;
                if (ls.clear(), ls.str(line), ls >> rest)
                    throw ParseError(line_no, "expected header 'n m'");
                continue;  // blank/comment line before header
            }
            header = true;
            continue;
        }
        long long u, v;
        if (!(ls >> u >> v)) {
            std::string rest;
            std::istringstream probe(line);
            if (probe >> rest) throw ParseError(line_no, "expected edge 'u v'");
            continue;
        }
        std::string trailing;
        if (ls >> trailing) throw ParseError(line_no, "trailing tokens after edge");
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
            throw ParseError(line_no, "vertex id out of range [0, n)");
        if (u == v) throw ParseError(line_no, "self-loop");
        if (!seen.insert(EdgeKey(static_cast<Vertex>(u), static_cast<Vertex>(v))).second)
            throw ParseError(line_no, "duplicate edge");
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    if (!header) throw ParseError(line_no, "missing header 'n m'");
    if (edges.size() != m)
        throw ParseError(line_no, "edge count mismatch: header says " + std::to_string(m) +
                                      ", file has " + std::to_string(edges.size()));
    return GraphView(n, edges);
}

GraphView load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_graph(in);
}

void save_graph(std::ostream& out, const GraphView& g) {
    out << g.n() << ' ' << g.m() << '\n';
    for (const auto& e : g.edges()) out << e.lo << ' ' << e.hi << '\n';
}

void save_graph_file(const std::string& path, const GraphView& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    save_graph(out, g);
}

namespace {

// Generator randomness is independent of the algorithm tape; a plain
// keyed stream suffices.
class GenStream {
  public:
    explicit GenStream(std::uint64_t seed, std::uint64_t salt)
        : tape_(seed ^ (salt * 0x9e3779b97f4a7c15ULL)) {}

    std::uint64_t next() { return tape_.word("gen", counter_++); }

    // Uniform in [0, bound) via rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t w;
        do {
            w = next();
        } while (w >= limit);
        return w % bound;
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    RandomTape tape_;
    std::uint64_t counter_ = 0;
};

}  // namespace

GraphView gen_gnp(std::size_t n, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("gen_gnp: p out of [0,1]");
    GenStream rng(seed, 1);
    std::vector<std::pair<Vertex, Vertex>> edges;
    if (p > 0.0) {
        for (Vertex u = 0; u + 1 < n; ++u)
            for (Vertex v = u + 1; v < n; ++v)
                if (rng.unit() < p) edges.emplace_back(u, v);
    }
    return GraphView(n, edges);
}

GraphView gen_regularish(std::size_t n, std::size_t degree, std::uint64_t seed) {
    if (n > 0 && degree > n - 1) throw std::invalid_argument("gen_regularish: degree > n-1");
    GenStream rng(seed, 2);
    std::set<EdgeKey> seen;
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<std::size_t> deg(n, 0);
    // Pair random stubs; give up on a stub after a bounded number of rejections
    // so near-regular is good enough.
    std::vector<Vertex> stubs;
    for (Vertex v = 0; v < n; ++v)
        for (std::size_t i = 0; i < degree; ++i) stubs.push_back(v);
    // seeded shuffle
    for (std::size_t i = stubs.size(); i > 1; --i)
        std::swap(stubs[i - 1], stubs[rng.below(i)]);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        Vertex u = stubs[i], v = stubs[i + 1];
        if (u == v) continue;
        EdgeKey e(u, v);
        if (seen.count(e)) continue;
        seen.insert(e);
        edges.emplace_back(u, v);
        ++deg[u];
        ++deg[v];
    }
    return GraphView(n, edges);
}

GraphView gen_planted_hubs(std::size_t n, std::size_t hubs, double p_background,
                           std::uint64_t seed) {
    if (hubs > n) throw std::invalid_argument("gen_planted_hubs: hubs > n");
    if (p_background < 0.0 || p_background > 1.0)
        throw std::invalid_argument("gen_planted_hubs: p out of [0,1]");
    GenStream rng(seed, 3);
    std::set<EdgeKey> seen;
    std::vector<std::pair<Vertex, Vertex>> edges;
    auto add = [&](Vertex u, Vertex v) {
        if (u == v) return;
        EdgeKey e(u, v);
        if (seen.insert(e).second) edges.emplace_back(u, v);
    };
    // Hubs 0..hubs-1 connect to a random ~60% of all vertices; a medium band
    // (next n/4 vertices) gets extra mutual edges; the rest is sparse gnp.
    for (Vertex h = 0; h < hubs; ++h)
        for (Vertex v = 0; v < n; ++v)
            if (rng.unit() < 0.6) add(h, v);
    std::size_t band_end = hubs + n / 4;
    if (band_end > n) band_end = n;
    for (Vertex u = static_cast<Vertex>(hubs); u < band_end; ++u) {
        std::size_t extra = 2 + rng.below(4);
        for (std::size_t i = 0; i < extra; ++i)
            add(u, static_cast<Vertex>(hubs + rng.below(band_end - hubs)));
    }
    if (p_background > 0.0) {
        for (Vertex u = 0; u + 1 < n; ++u)
            for (Vertex v = u + 1; v < n; ++v)
                if (rng.unit() < p_background) add(u, v);
    }
    return GraphView(n, edges);
}

}  // namespace lspan
