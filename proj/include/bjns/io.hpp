#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "bjns/inference.hpp"
#include "bjns/model.hpp"
#include "bjns/synthetic.hpp"

namespace bjns::io {

// All files use 1-based variable indices and full-precision "%.17g"
// numbers; CSV headers are mandatory.

std::string format_double(double v);

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m,
                      const std::vector<std::string>& columns);

// {"groups": [{"name": ..., "path": ...}, ...], "center": bool}
// Group order defines the group index k; paths resolve relative to the
// manifest's directory.
struct Manifest {
  struct Group {
    std::string name;
    std::filesystem::path path;
  };
  std::vector<Group> groups;
  bool center = true;
};

Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

// ModelSpec <-> {"K": int, "components": [[1,2,3], ...]} (canonical order).
std::string spec_to_json(const ModelSpec& spec);
ModelSpec spec_from_json_file(const std::filesystem::path& path, int p);

void write_fit_json(const std::filesystem::path& path, const FitResult& fit);

// The slice of fit.json that scoring needs.
struct LoadedFit {
  ModelSpec spec;
  std::vector<std::uint32_t> masks;  // selected category per edge
};
LoadedFit read_fit_json(const std::filesystem::path& path);

void write_truth_json(const std::filesystem::path& path, const GroundTruth& truth,
                      const std::string& design);
GroundTruth read_truth_json(const std::filesystem::path& path);

// Per-component edge list: component,i,j,value.
void write_truth_edges_csv(const std::filesystem::path& path,
                           const GroundTruth& truth);

// Component labels safe for CSV cells, e.g. "1-3-5".
std::string component_label(GroupSet set);

}  // namespace bjns::io
