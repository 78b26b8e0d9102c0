#pragma once

// SNAP-style edge-list input and output.
//
// One edge per line as two whitespace-separated labels. Lines whose first
// non-blank character is '#' or '%' are comments; blank lines are skipped.
// Labels are arbitrary tokens; nodes are numbered in order of first
// appearance. Files starting with the gzip magic bytes are inflated first.

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <zlib.h>

#include "closerank/error.hpp"
#include "closerank/graph.hpp"

namespace closerank {

namespace detail {

inline bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

inline bool is_gzip(std::string_view bytes) {
    return bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f &&
           static_cast<unsigned char>(bytes[1]) == 0x8b;
}

inline std::string gunzip(std::string_view bytes) {
    z_stream zs{};
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw Error("gzip: inflateInit2 failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
    zs.avail_in = static_cast<uInt>(bytes.size());

    std::string out;
    char buffer[1 << 16];
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = reinterpret_cast<Bytef*>(buffer);
        zs.avail_out = sizeof(buffer);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw ParseError(0, "gzip: corrupt or truncated stream");
        }
        out.append(buffer, sizeof(buffer) - zs.avail_out);
        // Concatenated gzip members.
        if (rc == Z_STREAM_END && zs.avail_in > 0) {
            inflateReset(&zs);
            rc = Z_OK;
        }
    }
    inflateEnd(&zs);
    return out;
}

}  // namespace detail

inline Graph parse_edge_list(std::string_view text) {
    if (detail::is_gzip(text)) {
        const std::string inflated = detail::gunzip(text);
        return parse_edge_list(std::string_view(inflated));
    }

    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    auto intern = [&](std::string_view token) {
        auto [it, inserted] = ids.try_emplace(std::string(token), static_cast<NodeId>(labels.size()));
        if (inserted) labels.emplace_back(token);
        return it->second;
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        std::string_view tokens[2];
        std::size_t count = 0;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && detail::is_blank(line[i])) ++i;
            if (i == line.size()) break;
            const std::size_t start = i;
            while (i < line.size() && !detail::is_blank(line[i])) ++i;
            if (count < 2) tokens[count] = line.substr(start, i - start);
            ++count;
        }
        if (count == 0) continue;
        if (tokens[0].front() == '#' || tokens[0].front() == '%') continue;
        if (count != 2)
            throw ParseError(line_no, "expected 2 tokens, found " + std::to_string(count));

        const NodeId u = intern(tokens[0]);
        const NodeId v = intern(tokens[1]);
        edges.emplace_back(u, v);
    }
    if (labels.empty()) throw ParseError(0, "empty input: no edges");
    const auto node_count = static_cast<NodeId>(labels.size());
    return Graph::from_edges(node_count, edges, std::move(labels));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error("error reading '" + path + "'");
    return bytes;
}

inline Graph read_edge_list(const std::string& path) { return parse_edge_list(read_file(path)); }

/// Writes each undirected edge once as "label_u label_v", u < v, ordered by
/// internal id. Isolated nodes have no representation in this format.
inline void write_edge_list(std::ostream& out, const Graph& g) {
    for (auto [u, v] : g.edges()) {
        if (g.has_labels())
            out << g.labels()[u] << ' ' << g.labels()[v] << '\n';
        else
            out << u << ' ' << v << '\n';
    }
}

}  // namespace closerank
