// random_tape.hpp — all algorithm randomness, derived from one 64-bit seed,
// plus the deterministic class/bucket helpers.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lspan/graph.hpp"

namespace lspan {

// Keyed PRF: (seed, label, args...) -> 64-bit word. Replayable; distinct
// labels act as independent streams.
class RandomTape {
  public:
    explicit RandomTape(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    template <class... Args>
    std::uint64_t word(std::string_view label, Args... args) const {
        std::uint64_t h = mix(seed_ ^ 0x6a09e667f3bcc908ULL);
        for (char c : label) h = mix(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
        ((h = mix(h ^ static_cast<std::uint64_t>(args))), ...);
        return mix(h);
    }

    // Uniform in [0, bound), bound > 0. Fixed-width multiply-shift keeps it
    // deterministic across platforms; bias is negligible for our bounds.
    template <class... Args>
    std::uint64_t word_below(std::uint64_t bound, std::string_view label, Args... args) const {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(word(label, args...)) * bound) >> 64);
    }

  private:
    static std::uint64_t mix(std::uint64_t x) {
        // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
};

// Geometric family of center sets S_1..S_t with halving sizes.
class CenterFamily {
  public:
    // Each S_i is a uniform x_i-subset of V, x_1 = base_size, x_{i+1} = ceil(x_i/2),
    // drawn by a seeded partial shuffle on stream (tape, label, i).
    CenterFamily(std::size_t n, std::size_t base_size, std::size_t levels,
                 const RandomTape& tape, std::string label);

    std::size_t levels() const { return sets_.size(); }
    std::size_t size(std::size_t level) const { return sets_.at(level - 1).size(); }
    // Sorted member ids of S_level (1-based level).
    const std::vector<Vertex>& set(std::size_t level) const { return sets_.at(level - 1); }
    bool contains(std::size_t level, Vertex v) const;
    const std::string& label() const { return label_; }

  private:
    std::vector<std::vector<Vertex>> sets_;
    std::string label_;
};

// Tunable constants behind the analysis's Theta(.)'s.
struct AlgParams {
    double c_centers = 1.0;    // multiplier on x_1 / y_1 / |S|
    double c_rep_sample = 3.0; // multiplier on the log n representative sample
    double c_L = 1.0;          // multiplier on L = c_L * n^{1/3} * log2 n
    std::size_t k = 2;         // stretch parameter of the k^2 algorithm
};

inline double log2n(std::size_t n) { return n > 1 ? std::log2(static_cast<double>(n)) : 1.0; }

inline std::size_t ceil_log2(double x) {
    std::size_t r = static_cast<std::size_t>(std::ceil(std::log2(x)));
    return r < 1 ? 1 : r;
}

// Def: class i w.r.t. delta covers deg in [2^{i-1}*delta+1, 2^i*delta].
inline std::size_t class_of(std::size_t deg, std::size_t delta) {
    if (delta == 0) throw std::invalid_argument("class_of: delta = 0");
    if (deg <= delta) throw std::invalid_argument("class_of: degree below classed range");
    std::size_t i = 1;
    std::size_t hi = 2 * delta;
    while (deg > hi) {
        ++i;
        hi *= 2;
    }
    return i;
}

// Def: index i lies in bucket j = ceil(i/delta), i.e. [(j-1)*delta+1, j*delta].
inline std::size_t bucket_of(std::size_t i, std::size_t delta) {
    if (i < 1) throw std::invalid_argument("bucket_of: index < 1");
    if (delta == 0) throw std::invalid_argument("bucket_of: delta = 0");
    return (i + delta - 1) / delta;
}

// `count` neighbor indices in [1, deg], with replacement, from (tape, label, v).
std::vector<std::size_t> vertex_sample(Vertex v, std::size_t deg, std::size_t count,
                                       const RandomTape& tape, std::string_view label);

// Random rank of a Voronoi cell; ties between equal words broken by center id
// at the comparison site.
inline std::uint64_t cell_rank(Vertex center_id, const RandomTape& tape) {
    return tape.word("cellrank", center_id);
}

inline bool cell_rank_less(Vertex c1, Vertex c2, const RandomTape& tape) {
    std::uint64_t r1 = cell_rank(c1, tape), r2 = cell_rank(c2, tape);
    if (r1 != r2) return r1 < r2;
    return c1 < c2;
}

// Marked independently with probability p_mark, deterministic per (seed, center).
inline bool is_marked(Vertex center_id, const RandomTape& tape, double p_mark) {
    if (p_mark >= 1.0) return true;
    if (p_mark <= 0.0) return false;
    return static_cast<double>(tape.word("mark", center_id) >> 11) * 0x1.0p-53 < p_mark;
}

}  // namespace lspan
