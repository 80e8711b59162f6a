#include "ggbm/graph_io.hpp"

#include <filesystem>

#include "ggbm/csv.hpp"

namespace ggbm {

namespace fs = std::filesystem;

namespace {

std::vector<NodeInput> parse_node_file(const std::string& path, const GraphSchema& schema) {
  CsvTable table = read_csv(path);
  if (table.header.size() < 3 || table.header[0] != "node_id" || table.header[1] != "node_type" ||
      table.header[2] != "label")
    throw ValidationError("graph: " + path + ": header must start with node_id,node_type,label");
  std::vector<NodeInput> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = path + ":" + std::to_string(table.line_numbers[r]);
    NodeInput n;
    n.id = row[0];
    n.type = row[1];
    if (!schema.has_node_type(n.type))
      throw ValidationError(where + ": unknown node type '" + n.type + "'");
    int arity = schema.node_type(schema.node_type_index(n.type)).arity();
    if (static_cast<int>(row.size()) - 3 != arity)
      throw ValidationError(where + ": arity mismatch: type '" + n.type + "' expects " +
                            std::to_string(arity) + " features, row has " +
                            std::to_string(row.size() - 3));
    if (!row[2].empty()) {
      double l = parse_double(row[2], where);
      if (l != 0.0 && l != 1.0) throw ValidationError(where + ": label must be 0, 1 or blank");
      n.label = static_cast<int>(l);
    }
    for (std::size_t i = 3; i < row.size(); ++i)
      n.features.push_back(parse_optional_double(row[i], where));
    out.push_back(std::move(n));
  }
  return out;
}

std::vector<EdgeInput> parse_edge_file(const std::string& path, const GraphSchema& schema,
                                       const std::string& forced_type) {
  CsvTable table = read_csv(path);
  if (table.header.size() < 2 || table.header[0] != "src" || table.header[1] != "dst")
    throw ValidationError("graph: " + path + ": header must start with src,dst");
  std::vector<EdgeInput> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = path + ":" + std::to_string(table.line_numbers[r]);
    EdgeInput e;
    e.u = row[0];
    e.v = row[1];
    e.type = forced_type;
    if (!schema.has_edge_type(e.type))
      throw ValidationError(where + ": unknown edge type '" + e.type + "'");
    for (std::size_t i = 2; i < row.size(); ++i)
      e.features.push_back(parse_optional_double(row[i], where));
    out.push_back(std::move(e));
  }
  return out;
}

std::string type_of_file(const std::string& path, const std::string& prefix) {
  // nodes.<type>.csv / edges.<type>.csv
  std::string name = fs::path(path).filename().string();
  if (name.rfind(prefix + ".", 0) == 0 && name.size() > prefix.size() + 5 &&
      name.substr(name.size() - 4) == ".csv")
    return name.substr(prefix.size() + 1, name.size() - prefix.size() - 5);
  throw ValidationError("graph: cannot infer type from file name '" + name + "' (expected " +
                        prefix + ".<type>.csv)");
}

}  // namespace

HinGraph load_graph(const std::vector<std::string>& node_files,
                    const std::vector<std::string>& edge_files, const std::string& schema_file) {
  GraphSchema schema = GraphSchema::load(schema_file);
  std::vector<NodeInput> nodes;
  for (const auto& f : node_files) {
    auto part = parse_node_file(f, schema);
    nodes.insert(nodes.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
  }
  std::vector<EdgeInput> edges;
  for (const auto& f : edge_files) {
    auto part = parse_edge_file(f, schema, type_of_file(f, "edges"));
    edges.insert(edges.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
  }
  return build_graph(schema, nodes, edges);
}

HinGraph load_graph_bundle(const std::string& dir) {
  fs::path base(dir);
  if (!fs::exists(base / "schema.json"))
    throw ValidationError("graph: missing schema.json in '" + dir + "'");
  GraphSchema schema = GraphSchema::load((base / "schema.json").string());
  std::vector<std::string> node_files, edge_files;
  for (const auto& t : schema.node_types()) {
    fs::path p = base / ("nodes." + t.name + ".csv");
    if (fs::exists(p)) node_files.push_back(p.string());
  }
  for (const auto& t : schema.edge_types()) {
    fs::path p = base / ("edges." + t.name + ".csv");
    if (fs::exists(p)) edge_files.push_back(p.string());
  }
  return load_graph(node_files, edge_files, (base / "schema.json").string());
}

void save_graph_bundle(const HinGraph& g, const std::string& dir) {
  fs::create_directories(dir);
  fs::path base(dir);
  g.schema().save((base / "schema.json").string());

  for (int t = 0; t < g.schema().num_node_types(); ++t) {
    const auto& def = g.schema().node_type(t);
    CsvWriter out((base / ("nodes." + def.name + ".csv")).string());
    std::vector<std::string> header{"node_id", "node_type", "label"};
    for (const auto& f : def.features) header.push_back(f.name);
    out.row(header);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      if (g.node_type(v) != t) continue;
      std::vector<std::string> row{g.external_id(v), def.name,
                                   g.has_label(v) ? std::to_string(*g.label(v)) : ""};
      const VecD& feat = g.node_features(v);
      const MaskVec& miss = g.node_missing(v);
      for (Eigen::Index i = 0; i < feat.size(); ++i)
        row.push_back(miss(i) ? "" : format_double(feat(i)));
      out.row(row);
    }
  }

  for (int t = 0; t < g.schema().num_edge_types(); ++t) {
    const auto& def = g.schema().edge_type(t);
    CsvWriter out((base / ("edges." + def.name + ".csv")).string());
    std::vector<std::string> header{"src", "dst"};
    for (const auto& f : def.features) header.push_back(f.name);
    out.row(header);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const auto& edge = g.edge(e);
      if (edge.type != t) continue;
      std::vector<std::string> row{g.external_id(edge.u), g.external_id(edge.v)};
      for (Eigen::Index i = 0; i < edge.features.size(); ++i)
        row.push_back(edge.missing(i) ? "" : format_double(edge.features(i)));
      out.row(row);
    }
  }
}

}  // namespace ggbm
