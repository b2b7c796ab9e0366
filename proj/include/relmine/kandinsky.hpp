#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relmine/footprint.hpp"
#include "relmine/relevance.hpp"

namespace relmine {

// Edge weight -> color buckets; first bucket whose upper bound holds.
struct ColorScheme {
    struct Bucket {
        std::uint64_t upper;  // inclusive; 0 = unbounded
        const char *color;
    };
    std::vector<Bucket> buckets;

    // gray <=2, black <=4, indigo <=10, green <=20, red above
    static ColorScheme kg();
    // gray <=1, black <=2, indigo <=5, green <=10, red above
    static ColorScheme diff_kg();
};

// Throws std::invalid_argument for w < 1.
const char *color_for_weight(std::uint64_t w, const ColorScheme &scheme);

// Deterministic circo-layout DOT document: nodes in lexicographic key
// order, edges in lexicographic (from, to) order, each edge colored per
// scheme with a weight label and pen width 1 + floor(log2(w)), cap 8.
std::string emit_dot(const UsageGraph &graph, const ColorScheme &scheme);
std::string emit_dot(const DiffGraph &graph, const ColorScheme &scheme);

}  // namespace relmine
