#include "lspan/random_tape.hpp"

#include <algorithm>
#include <numeric>

namespace lspan {

CenterFamily::CenterFamily(std::size_t n, std::size_t base_size, std::size_t levels,
                           const RandomTape& tape, std::string label)
    : label_(std::move(label)) {
    if (levels < 1) throw std::invalid_argument("CenterFamily: levels < 1");
    if (base_size > n) throw std::invalid_argument("CenterFamily: base_size > n");
    std::size_t size = base_size;
    sets_.reserve(levels);
    const std::string stream = label_ + ":centers";
    for (std::size_t level = 1; level <= levels; ++level) {
        // Partial Fisher-Yates: the first `size` slots after the seeded swaps
        // are a uniform subset of V.
        std::vector<Vertex> pool(n);
        std::iota(pool.begin(), pool.end(), 0u);
        for (std::size_t j = 0; j < size && j < n; ++j) {
            std::size_t pick =
                j + tape.word_below(n - j, stream, std::uint64_t(level), std::uint64_t(j));
            std::swap(pool[j], pool[pick]);
        }
        std::vector<Vertex> chosen(pool.begin(), pool.begin() + std::min(size, n));
        std::sort(chosen.begin(), chosen.end());
        sets_.push_back(std::move(chosen));
        size = (size + 1) / 2;  // ceil halving
    }
}

bool CenterFamily::contains(std::size_t level, Vertex v) const {
    const auto& s = sets_.at(level - 1);
    return std::binary_search(s.begin(), s.end(), v);
}

std::vector<std::size_t> vertex_sample(Vertex v, std::size_t deg, std::size_t count,
                                       const RandomTape& tape, std::string_view label) {
    if (deg == 0) return {};
    std::vector<std::size_t> out(count);
    for (std::size_t j = 0; j < count; ++j)
        out[j] = 1 + tape.word_below(deg, label, std::uint64_t(v), std::uint64_t(j));
    return out;
}

}  // namespace lspan
