#include "relmine/kandinsky.hpp"

#include <set>
#include <stdexcept>

namespace relmine {

ColorScheme ColorScheme::kg() {
    return ColorScheme{{{2, "gray"}, {4, "black"}, {10, "indigo"}, {20, "green"}, {0, "red"}}};
}

ColorScheme ColorScheme::diff_kg() {
    return ColorScheme{{{1, "gray"}, {2, "black"}, {5, "indigo"}, {10, "green"}, {0, "red"}}};
}

const char *color_for_weight(std::uint64_t w, const ColorScheme &scheme) {
    if (w < 1) throw std::invalid_argument("edge weight must be >= 1");
    for (const auto &b : scheme.buckets) {
        if (b.upper == 0 || w <= b.upper) return b.color;
    }
    throw std::logic_error("color scheme has no unbounded bucket");
}

namespace {

std::string escape_label(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

// Middle-ellipsize labels over 40 characters; node identity untouched.
std::string display_label(const std::string &key) {
    constexpr std::size_t kMax = 40;
    if (key.size() <= kMax) return key;
    return key.substr(0, 18) + "..." + key.substr(key.size() - 19);
}

unsigned pen_width(std::uint64_t w) {
    unsigned width = 1;
    while (w >= 2 && width < 8) {
        w >>= 1;
        ++width;
    }
    return width;
}

std::string emit(const std::map<std::pair<ResourceKey, ResourceKey>, std::uint64_t> &edges,
                 const std::set<ResourceKey> &nodes, const ColorScheme &scheme,
                 const char *graph_name) {
    std::string out;
    out += "digraph ";
    out += graph_name;
    out += " {\n";
    out += "  layout=circo;\n";
    for (const auto &node : nodes) {
        out += "  \"" + escape_label(node) + "\" [label=\"" + escape_label(display_label(node)) +
               "\"];\n";
    }
    for (const auto &[edge, w] : edges) {
        out += "  \"" + escape_label(edge.first) + "\" -> \"" + escape_label(edge.second) +
               "\" [label=\"" + std::to_string(w) + "\", color=" + color_for_weight(w, scheme) +
               ", penwidth=" + std::to_string(pen_width(w)) + "];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace

std::string emit_dot(const UsageGraph &graph, const ColorScheme &scheme) {
    return emit(graph.edges, graph.nodes, scheme, "kandinsky");
}

std::string emit_dot(const DiffGraph &graph, const ColorScheme &scheme) {
    std::set<ResourceKey> nodes;
    for (const auto &[edge, _] : graph.edges) {
        nodes.insert(edge.first);
        nodes.insert(edge.second);
    }
    return emit(graph.edges, nodes, scheme, "diff_kandinsky");
}

}  // namespace relmine
