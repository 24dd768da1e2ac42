#include "featnet/io.hpp"

#include <absl/container/flat_hash_map.h>

#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "featnet/common.hpp"

namespace featnet {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw DataError("write to " + path.string() + " failed");
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

// Calls fn(fields, line_number) for every data line.
template <class Fn>
void for_each_record(const std::filesystem::path& path, Fn&& fn) {
  auto in = open_in(path);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;
    fn(split_tabs(view), number);
  }
  if (in.bad()) throw DataError("read from " + path.string() + " failed");
}

[[noreturn]] void fail_at(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  throw DataError(path.string() + ":" + std::to_string(line) + ": " + what);
}

template <class T>
T parse_number(std::string_view text, const std::filesystem::path& path, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail_at(path, line, "cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

// Dense id registry with an optional closed dictionary.
class IdTable {
 public:
  std::uint32_t intern(std::string_view label) {
    auto it = index_.find(label);
    if (it != index_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(labels_.size());
    labels_.emplace_back(label);
    index_.emplace(labels_.back(), id);
    return id;
  }
  std::optional<std::uint32_t> find(std::string_view label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t size() const { return labels_.size(); }
  std::vector<std::string> labels() const {
    return std::vector<std::string>(labels_.begin(), labels_.end());
  }

 private:
  std::deque<std::string> labels_;  // stable addresses for the string_view keys
  absl::flat_hash_map<std::string_view, std::uint32_t> index_;
};

void load_dictionary(const std::filesystem::path& path, IdTable& table) {
  for_each_record(path, [&](const std::vector<std::string_view>& f, std::size_t line) {
    if (f[0].empty()) fail_at(path, line, "empty id");
    if (table.find(f[0])) fail_at(path, line, "duplicate id '" + std::string(f[0]) + "'");
    table.intern(f[0]);
  });
}

}  // namespace

Dataset load_dataset(const DatasetPaths& paths) {
  IdTable nodes;
  IdTable features;
  const bool closed_nodes = paths.nodes.has_value();
  const bool closed_features = paths.feature_dict.has_value();
  if (closed_nodes) load_dictionary(*paths.nodes, nodes);
  if (closed_features) load_dictionary(*paths.feature_dict, features);

  auto node_id = [&](std::string_view label, const std::filesystem::path& path, std::size_t line) {
    if (label.empty()) fail_at(path, line, "empty node id");
    if (closed_nodes) {
      auto id = nodes.find(label);
      if (!id) fail_at(path, line, "node '" + std::string(label) + "' is not in the node dictionary");
      return *id;
    }
    return nodes.intern(label);
  };

  std::vector<Arc> arcs;
  for_each_record(paths.edges, [&](const std::vector<std::string_view>& f, std::size_t line) {
    if (f.size() != 2) fail_at(paths.edges, line, "expected 2 tab-separated fields, got " + std::to_string(f.size()));
    const NodeId src = node_id(f[0], paths.edges, line);
    const NodeId dst = node_id(f[1], paths.edges, line);
    arcs.push_back({src, dst});
  });

  std::vector<std::pair<NodeId, FeatureId>> inc;
  for_each_record(paths.features, [&](const std::vector<std::string_view>& f, std::size_t line) {
    if (f.size() != 2) fail_at(paths.features, line, "expected 2 tab-separated fields, got " + std::to_string(f.size()));
    const NodeId node = node_id(f[0], paths.features, line);
    if (f[1].empty()) fail_at(paths.features, line, "empty feature id");
    FeatureId feature;
    if (closed_features) {
      auto id = features.find(f[1]);
      if (!id) fail_at(paths.features, line, "feature '" + std::string(f[1]) + "' is not in the feature dictionary");
      feature = *id;
    } else {
      feature = features.intern(f[1]);
    }
    inc.emplace_back(node, feature);
  });

  Dataset ds;
  const std::size_t raw_arcs = arcs.size();
  const std::size_t raw_inc = inc.size();
  ds.graph = FeatureGraph(nodes.size(), std::move(arcs));
  ds.features = FeatureAssignment(nodes.size(), features.size(), std::move(inc));
  ds.duplicate_arcs = raw_arcs - ds.graph.num_arcs();
  ds.duplicate_incidences = raw_inc - ds.features.num_incidences();
  ds.node_ids = nodes.labels();
  ds.feature_ids = features.labels();
  return ds;
}

void write_id_map(const std::vector<std::string>& ids, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < ids.size(); ++i) out << i << '\t' << ids[i] << '\n';
  finish(out, path);
}

DatasetPaths write_dataset(const FeatureGraph& g, const FeatureAssignment& z,
                           const std::string& prefix) {
  if (g.num_nodes() != z.num_nodes()) {
    throw std::domain_error("graph and assignment disagree on the node count");
  }
  DatasetPaths paths{prefix + ".edges.tsv", prefix + ".features.tsv", prefix + ".nodes.tsv",
                     prefix + ".feature-ids.tsv"};
  {
    auto out = open_out(paths.edges);
    g.for_each_arc([&](NodeId i, NodeId j) { out << i << '\t' << j << '\n'; });
    finish(out, paths.edges);
  }
  {
    auto out = open_out(paths.features);
    for (NodeId i = 0; i < z.num_nodes(); ++i) {
      for (FeatureId h : z.features_of(i)) out << i << '\t' << h << '\n';
    }
    finish(out, paths.features);
  }
  {
    auto out = open_out(*paths.nodes);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) out << i << '\n';
    finish(out, *paths.nodes);
  }
  {
    auto out = open_out(*paths.feature_dict);
    for (std::size_t h = 0; h < z.num_features(); ++h) out << h << '\n';
    finish(out, *paths.feature_dict);
  }
  return paths;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void save_matrix(const InteractionMatrix& w, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "# featnet-matrix m=" << w.size() << " symmetric=" << (w.symmetric() ? 1 : 0) << '\n';
  w.for_each_nonzero([&](FeatureId h, FeatureId k, double v) {
    out << h << '\t' << k << '\t' << format_double(v) << '\n';
  });
  finish(out, path);
}

InteractionMatrix load_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string header;
  if (!std::getline(in, header)) fail_at(path, 1, "missing matrix header");
  std::size_t m = 0;
  int symmetric = 0;
  {
    std::istringstream hs(header);
    std::string tag, m_field, sym_field;
    hs >> tag >> tag >> m_field >> sym_field;
    if (tag != "featnet-matrix" || m_field.rfind("m=", 0) != 0 || sym_field.rfind("symmetric=", 0) != 0) {
      fail_at(path, 1, "malformed matrix header");
    }
    m = parse_number<std::size_t>(std::string_view(m_field).substr(2), path, 1);
    symmetric = parse_number<int>(std::string_view(sym_field).substr(10), path, 1);
    if (symmetric != 0 && symmetric != 1) fail_at(path, 1, "symmetric flag must be 0 or 1");
  }
  in.close();

  InteractionMatrix w(m, symmetric == 1);
  for_each_record(path, [&](const std::vector<std::string_view>& f, std::size_t line) {
    if (f.size() != 3) fail_at(path, line, "expected h<TAB>k<TAB>weight");
    const auto h = parse_number<FeatureId>(f[0], path, line);
    const auto k = parse_number<FeatureId>(f[1], path, line);
    const auto v = parse_number<double>(f[2], path, line);
    if (h >= m || k >= m) fail_at(path, line, "feature pair outside the declared size");
    if (!std::isfinite(v)) fail_at(path, line, "weight must be finite");
    w.set(h, k, v);
  });
  return w;
}

void write_curve_csv(const PrCurve& curve, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "recall,precision\n";
  for (const auto& p : curve.points) {
    out << format_double(p.recall) << ',' << format_double(p.precision) << '\n';
  }
  finish(out, path);
}

void write_report_csv(const EvalReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "fold,aupr\n";
  for (std::size_t i = 0; i < report.folds.size(); ++i) {
    out << report.folds[i] << ',' << format_double(report.per_fold_aupr[i]) << '\n';
  }
  out << "mean,std\n" << format_double(report.mean) << ',' << format_double(report.std) << '\n';
  finish(out, path);
}

std::vector<ScoredPair> load_scored_pairs(const std::filesystem::path& path) {
  std::vector<ScoredPair> out;
  IdTable nodes;  // pair endpoints are labels; only score and label matter downstream
  for_each_record(path, [&](const std::vector<std::string_view>& f, std::size_t line) {
    if (f.size() != 4) fail_at(path, line, "expected src<TAB>dst<TAB>score<TAB>label");
    ScoredPair sp;
    sp.src = nodes.intern(f[0]);
    sp.dst = nodes.intern(f[1]);
    sp.score = parse_number<double>(f[2], path, line);
    if (!std::isfinite(sp.score)) fail_at(path, line, "score must be finite");
    sp.label = parse_number<int>(f[3], path, line);
    if (sp.label != 1 && sp.label != -1) fail_at(path, line, "label must be 1 or -1");
    out.push_back(sp);
  });
  return out;
}

}  // namespace featnet
