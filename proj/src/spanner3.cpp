#include "lspan/spanner3.hpp"

#include <algorithm>
#include <cmath>

namespace lspan {

namespace {

std::size_t base_size3(std::size_t n, const AlgParams& params) {
    double x1 = params.c_centers * std::sqrt(static_cast<double>(n)) * log2n(n);
    auto sz = static_cast<std::size_t>(std::ceil(x1));
    return std::min(sz < 1 ? 1 : sz, n);
}

}  // namespace

Spanner3Context::Spanner3Context(std::size_t n_, std::uint64_t seed, const AlgParams& params)
    : n(n_),
      threshold(static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_))))),
      tape(seed),
      family(n_, base_size3(n_, params), ceil_log2(std::sqrt(static_cast<double>(n_ > 1 ? n_ : 2))),
             tape, "S") {
    if (n == 0) throw std::invalid_argument("Spanner3Context: empty graph");
}

const std::vector<Vertex>& Spanner3Context::level_set(std::size_t c) const {
    static const std::vector<Vertex> kEmpty;
    if (c < 1 || c > family.levels()) return kEmpty;
    return family.set(c);
}

std::vector<Vertex> centers3_of(Vertex u, std::size_t c, const Spanner3Context& ctx,
                                const ProbeOracle& oracle) {
    std::vector<Vertex> out;
    for (Vertex s : ctx.level_set(c))
        if (oracle.adjacent(u, s)) out.push_back(s);
    return out;
}

bool in_cluster3(Vertex y, Vertex x, std::size_t level, const Spanner3Context& ctx,
                 const ProbeOracle& oracle) {
    if (y == x) return false;  // no self-loops: x is not a clustered neighbor of itself
    std::size_t deg = oracle.degree(y);
    if (deg <= ctx.threshold) return false;
    if (class_of(deg, ctx.threshold) != level) return false;
    return oracle.adjacent(x, y).has_value();
}

bool query3(Vertex u, Vertex v, const Spanner3Context& ctx, const ProbeOracle& oracle) {
    if (ctx.strict && !oracle.adjacent(u, v)) throw NotAnEdge(u, v);

    std::size_t du = oracle.degree(u);
    std::size_t dv = oracle.degree(v);
    // Orient so deg(u) >= deg(v); degree tie: larger id plays u.
    if (du < dv || (du == dv && u < v)) {
        std::swap(u, v);
        std::swap(du, dv);
    }

    if (dv <= ctx.threshold) return true;

    const std::size_t c = class_of(du, ctx.threshold);
    if (ctx.is_center(c, v)) return true;

    const std::vector<Vertex> centers = centers3_of(u, c, ctx, oracle);
    if (centers.empty()) return true;  // clustering failed for u: keep the edge

    const std::size_t i = oracle.adjacent(v, u).value();
    const std::size_t b = bucket_of(i, ctx.threshold);
    const std::size_t j_lo = (b - 1) * ctx.threshold + 1;

    for (Vertex x : centers) {
        bool blocked = false;
        for (std::size_t j = j_lo; j < i; ++j) {
            Vertex w = oracle.neighbor(v, j).value();
            if (in_cluster3(w, x, c, ctx, oracle)) {
                blocked = true;
                break;
            }
        }
        if (!blocked) return true;
    }
    return false;
}

}  // namespace lspan
