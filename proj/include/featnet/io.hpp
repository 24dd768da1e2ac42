#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "featnet/eval.hpp"
#include "featnet/features.hpp"
#include "featnet/graph.hpp"
#include "featnet/interaction_matrix.hpp"

namespace featnet {

// Text formats are UTF-8, tab-separated, one record per '\n'-terminated line.
// Blank lines and lines starting with '#' are ignored on input.
//
//   edges     src<TAB>dst
//   features  node<TAB>feature
//   ids       id[<TAB>anything]   (dictionary: fixes dense order, rejects unknown ids)
//   matrix    "# featnet-matrix m=<m> symmetric=<0|1>" then h<TAB>k<TAB>weight
//   scores    src<TAB>dst<TAB>score<TAB>label   (label is 1 or -1)

struct DatasetPaths {
  std::filesystem::path edges;
  std::filesystem::path features;
  std::optional<std::filesystem::path> nodes;          // node dictionary
  std::optional<std::filesystem::path> feature_dict;   // feature dictionary
};

struct Dataset {
  FeatureGraph graph;
  FeatureAssignment features;
  std::vector<std::string> node_ids;     // dense id -> original label
  std::vector<std::string> feature_ids;  // dense id -> original label
  std::size_t duplicate_arcs = 0;
  std::size_t duplicate_incidences = 0;
};

// Ids are densified in order of first appearance (dictionary, then edges, then
// features). Throws DataError with file:line context on malformed input or on
// an id missing from a supplied dictionary.
Dataset load_dataset(const DatasetPaths& paths);

// Writes "dense<TAB>label" lines.
void write_id_map(const std::vector<std::string>& ids, const std::filesystem::path& path);

// Writes <prefix>.edges.tsv, .features.tsv, .nodes.tsv and .feature-ids.tsv
// with integer ids; loading them back with the dictionaries is an identity.
DatasetPaths write_dataset(const FeatureGraph& g, const FeatureAssignment& z,
                           const std::string& prefix);

void save_matrix(const InteractionMatrix& w, const std::filesystem::path& path);
InteractionMatrix load_matrix(const std::filesystem::path& path);

// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

void write_curve_csv(const PrCurve& curve, const std::filesystem::path& path);

// "fold,aupr" rows, then a "mean,std" header and its value row.
void write_report_csv(const EvalReport& report, const std::filesystem::path& path);

std::vector<ScoredPair> load_scored_pairs(const std::filesystem::path& path);

}  // namespace featnet
