#pragma once

#include <string>

#include "fairrep/types.hpp"

namespace fairrep::io {

/// All vertex positions, class indices, part colors and permutation images
/// are 1-based on the wire and 0-based in memory.

enum class InstanceKind { Interval, Bipartite, EdgeSets };

InstanceKind detect_kind(const std::string& json_text);

VertexPartition parse_interval(const std::string& json_text);
ColorMatrix parse_bipartite(const std::string& json_text);
BipartiteEdgeSets parse_edge_sets(const std::string& json_text);

std::string render_interval(const VertexPartition& vp);
std::string render_bipartite(const ColorMatrix& cm);
std::string render_edge_sets(const BipartiteEdgeSets& es);

std::string render_report(const FairnessReport& rep);
std::string render_set_solution(const IndependentSet& s, const FairnessReport& rep);
std::string render_perm_solution(const Permutation& p, const FairnessReport& rep);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace fairrep::io
