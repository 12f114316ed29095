#include "bjns/io.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace bjns::io {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

ordered_json parse_json(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

ordered_json spec_json(const ModelSpec& spec) {
  ordered_json components = ordered_json::array();
  for (const GroupSet& c : spec.components)
    components.push_back(c.members());
  return ordered_json{{"K", spec.K}, {"components", components}};
}

ModelSpec spec_from_json(const ordered_json& j, int p,
                         const std::string& where) {
  if (!j.contains("K") || !j.contains("components"))
    throw InvalidArgument(where + ": spec needs \"K\" and \"components\"");
  const int K = j.at("K").get<int>();
  std::vector<GroupSet> components;
  for (const auto& arr : j.at("components")) {
    std::uint32_t mask = 0;
    for (const auto& k : arr) {
      const int g = k.get<int>();
      if (g < 1 || g > K)
        throw InvalidArgument(where + ": component member " + std::to_string(g) +
                              " outside 1.." + std::to_string(K));
      mask |= 1u << (g - 1);
    }
    components.push_back(GroupSet(mask));
  }
  return ModelSpec::make(K, p, components);
}

}  // namespace

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line))
    throw InvalidArgument(path.string() + ": empty file (header required)");
  const std::size_t cols = split_csv_line(line).size();
  if (cols == 0) throw InvalidArgument(path.string() + ": empty header");

  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != cols)
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) +
                            ": expected " + std::to_string(cols) +
                            " fields, got " + std::to_string(fields.size()));
    for (const std::string& f : fields) {
      try {
        std::size_t used = 0;
        const double v = std::stod(f, &used);
        if (used != f.size()) throw std::invalid_argument(f);
        data.push_back(v);
      } catch (const std::exception&) {
        throw InvalidArgument(path.string() + ":" + std::to_string(lineno) +
                              ": not a number: \"" + f + "\"");
      }
    }
    ++rows;
  }
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = data[r * cols + c];
  return m;
}

void write_csv_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& columns) {
  if (static_cast<long>(columns.size()) != m.cols())
    throw InvalidArgument("write_csv_matrix: header size mismatch");
  std::ofstream out = open_output(path);
  for (std::size_t c = 0; c < columns.size(); ++c)
    out << (c ? "," : "") << columns[c];
  out << "\n";
  for (long r = 0; r < m.rows(); ++r) {
    for (long c = 0; c < m.cols(); ++c)
      out << (c ? "," : "") << format_double(m(r, c));
    out << "\n";
  }
}

Manifest read_manifest(const std::filesystem::path& path) {
  const ordered_json j = parse_json(path);
  if (!j.contains("groups") || !j.at("groups").is_array() ||
      j.at("groups").empty())
    throw InvalidArgument(path.string() + ": manifest needs a nonempty \"groups\" array");
  Manifest manifest;
  manifest.center = j.value("center", true);
  const std::filesystem::path base = path.parent_path();
  for (const auto& g : j.at("groups")) {
    if (!g.contains("name") || !g.contains("path"))
      throw InvalidArgument(path.string() + ": each group needs \"name\" and \"path\"");
    std::filesystem::path p = g.at("path").get<std::string>();
    if (p.is_relative()) p = base / p;
    manifest.groups.push_back({g.at("name").get<std::string>(), p});
  }
  return manifest;
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  ordered_json groups = ordered_json::array();
  for (const Manifest::Group& g : manifest.groups)
    groups.push_back(
        {{"name", g.name}, {"path", g.path.filename().string()}});
  ordered_json j{{"groups", groups}, {"center", manifest.center}};
  open_output(path) << j.dump(2) << "\n";
}

std::string spec_to_json(const ModelSpec& spec) { return spec_json(spec).dump(2); }

ModelSpec spec_from_json_file(const std::filesystem::path& path, int p) {
  return spec_from_json(parse_json(path), p, path.string());
}

void write_fit_json(const std::filesystem::path& path, const FitResult& fit) {
  ordered_json edges = ordered_json::array();
  for (const EdgeFit& e : fit.edges) {
    ordered_json rec{{"i", e.i + 1}, {"j", e.j + 1}};
    if (e.selected == kAbsent)
      rec["component"] = nullptr;
    else
      rec["component"] = fit.spec.components[e.selected].members();
    rec["freq"] = e.frequency;
    rec["est"] = e.estimate;
    if (e.ci)
      rec["ci"] = {e.ci->first, e.ci->second};
    else
      rec["ci"] = nullptr;
    edges.push_back(std::move(rec));
  }

  ordered_json adjacency = ordered_json::array();
  for (int k = 1; k <= fit.spec.K; ++k) {
    ordered_json list = ordered_json::array();
    for (const EdgeFit& e : fit.edges)
      if (e.selected != kAbsent && fit.spec.components[e.selected].contains(k))
        list.push_back({e.i + 1, e.j + 1});
    adjacency.push_back(std::move(list));
  }

  ordered_json diag = ordered_json::array();
  for (int k = 0; k < fit.spec.K; ++k) {
    ordered_json row = ordered_json::array();
    for (int i = 0; i < fit.spec.p; ++i) row.push_back(fit.diag_mean(k, i));
    diag.push_back(std::move(row));
  }

  ordered_json j{{"p", fit.spec.p},
                 {"retained", fit.retained},
                 {"ci_level", fit.ci_level},
                 {"spec", spec_json(fit.spec)},
                 {"edges", std::move(edges)},
                 {"adjacency", std::move(adjacency)},
                 {"diag_mean", std::move(diag)}};
  open_output(path) << j.dump(2) << "\n";
}

LoadedFit read_fit_json(const std::filesystem::path& path) {
  const ordered_json j = parse_json(path);
  if (!j.contains("p") || !j.contains("spec") || !j.contains("edges"))
    throw InvalidArgument(path.string() + ": not a fit file");
  const int p = j.at("p").get<int>();
  LoadedFit fit;
  fit.spec = spec_from_json(j.at("spec"), p, path.string());
  fit.masks.assign(edge_count(p), 0);
  for (const auto& rec : j.at("edges")) {
    const int i = rec.at("i").get<int>() - 1;
    const int jj = rec.at("j").get<int>() - 1;
    if (i < 0 || jj <= i || jj >= p)
      throw InvalidArgument(path.string() + ": bad edge indices");
    if (rec.at("component").is_null()) continue;
    std::uint32_t mask = 0;
    for (const auto& k : rec.at("component"))
      mask |= 1u << (k.get<int>() - 1);
    fit.masks[edge_index(i, jj, p)] = mask;
  }
  return fit;
}

void write_truth_json(const std::filesystem::path& path, const GroundTruth& truth,
                      const std::string& design) {
  ordered_json edges = ordered_json::array();
  const int p = truth.spec.p;
  for (int e = 0; e < edge_count(p); ++e) {
    if (truth.edge_mask[e] == 0) continue;
    const Edge ij = edge_at(e, p);
    edges.push_back(ordered_json{{"i", ij.i + 1},
                                 {"j", ij.j + 1},
                                 {"component", GroupSet(truth.edge_mask[e]).members()},
                                 {"value", truth.edge_value[e]}});
  }
  ordered_json j{{"design", design},
                 {"p", p},
                 {"d_t", truth.d_t},
                 {"spec", spec_json(truth.spec)},
                 {"edges", std::move(edges)}};
  open_output(path) << j.dump(2) << "\n";
}

GroundTruth read_truth_json(const std::filesystem::path& path) {
  const ordered_json j = parse_json(path);
  if (!j.contains("p") || !j.contains("spec") || !j.contains("edges"))
    throw InvalidArgument(path.string() + ": not a truth file");
  const int p = j.at("p").get<int>();
  GroundTruth truth;
  truth.spec = spec_from_json(j.at("spec"), p, path.string());
  truth.edge_mask.assign(edge_count(p), 0);
  truth.edge_value.assign(edge_count(p), 0.0);
  for (const auto& rec : j.at("edges")) {
    const int i = rec.at("i").get<int>() - 1;
    const int jj = rec.at("j").get<int>() - 1;
    if (i < 0 || jj <= i || jj >= p)
      throw InvalidArgument(path.string() + ": bad edge indices");
    std::uint32_t mask = 0;
    for (const auto& k : rec.at("component"))
      mask |= 1u << (k.get<int>() - 1);
    const int e = edge_index(i, jj, p);
    truth.edge_mask[e] = mask;
    truth.edge_value[e] = rec.at("value").get<double>();
  }
  truth.d_t = 0;
  for (std::uint32_t m : truth.edge_mask)
    if (m) ++truth.d_t;
  return truth;
}

void write_truth_edges_csv(const std::filesystem::path& path,
                           const GroundTruth& truth) {
  std::ofstream out = open_output(path);
  out << "component,i,j,value\n";
  const int p = truth.spec.p;
  for (const GroupSet& c : truth.spec.components) {
    for (int e = 0; e < edge_count(p); ++e) {
      if (truth.edge_mask[e] != c.mask()) continue;
      const Edge ij = edge_at(e, p);
      out << component_label(c) << ',' << ij.i + 1 << ',' << ij.j + 1 << ','
          << format_double(truth.edge_value[e]) << "\n";
    }
  }
}

std::string component_label(GroupSet set) {
  std::string out;
  for (int k : set.members()) {
    if (!out.empty()) out += '-';
    out += std::to_string(k);
  }
  return out;
}

}  // namespace bjns::io
