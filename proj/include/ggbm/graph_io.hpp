#pragma once

#include <string>
#include <vector>

#include "ggbm/hin_graph.hpp"

namespace ggbm {

// On-disk graph bundle: a directory with schema.json plus one
// nodes.<type>.csv per node type (node_id,node_type,label,features...) and
// one edges.<type>.csv per edge type (src,dst,features...). Blank label and
// feature cells mean unknown/missing.

HinGraph load_graph(const std::vector<std::string>& node_files,
                    const std::vector<std::string>& edge_files, const std::string& schema_file);

HinGraph load_graph_bundle(const std::string& dir);
void save_graph_bundle(const HinGraph& g, const std::string& dir);

}  // namespace ggbm
