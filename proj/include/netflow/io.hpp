#ifndef NETFLOW_IO_HPP
#define NETFLOW_IO_HPP

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "netflow/clustering.hpp"
#include "netflow/errors.hpp"
#include "netflow/flow_distance.hpp"
#include "netflow/generators.hpp"
#include "netflow/graph.hpp"

// All text formats are line-oriented; lines starting with '#' are comments
// and writers emit "# netflow-dist v1" first so files are self-identifying.
// Reals are serialized with 17 significant digits, which round-trips IEEE
// doubles exactly, so identical runs produce byte-identical files.

namespace netflow {

inline constexpr const char* kFormatVersion = "netflow-dist v1";

namespace detail {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  const auto a = s.find_first_not_of(ws);
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(ws);
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

// Content lines of a text file with their 1-based line numbers; blank
// lines and '#' comments are dropped here so parsers see only data.
struct NumberedLine {
  int number;
  std::string text;
};

inline std::vector<NumberedLine> read_content_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<NumberedLine> lines;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string t = trim(raw);
    if (t.empty() || t[0] == '#') continue;
    lines.push_back({number, std::move(t)});
  }
  return lines;
}

inline double parse_double(const std::string& token, const std::string& path,
                           int line) {
  const std::string t = trim(token);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw ParseError(path + ":" + std::to_string(line) + ": bad number '" +
                     token + "'");
  return v;
}

inline long long parse_int(const std::string& token, const std::string& path,
                           int line) {
  const std::string t = trim(token);
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size())
    throw ParseError(path + ":" + std::to_string(line) + ": bad integer '" +
                     token + "'");
  return v;
}

inline std::uint64_t parse_uint64(const std::string& token,
                                  const std::string& path, int line) {
  const std::string t = trim(token);
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || t[0] == '-')
    throw ParseError(path + ":" + std::to_string(line) + ": bad seed '" +
                     token + "'");
  return v;
}

inline std::ofstream open_for_write(const std::string& path,
                                    bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

inline void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

// Labels double as file names inside bundle directories.
inline void check_label(const std::string& label) {
  if (label.empty()) throw InputError("empty graph label");
  for (char c : label) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok)
      throw InputError("label '" + label +
                       "' contains characters unsafe for file names");
  }
}

}  // namespace detail

// ---------------------------------------------------------------- graphs

inline void save_adjacency_csv(const Graph& g, const std::string& path) {
  auto out = detail::open_for_write(path);
  out << "# " << kFormatVersion << "\n";
  const int n = g.node_count();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out << ',';
      out << (i != j && g.has_edge(i, j) ? '1' : '0');
    }
    out << '\n';
  }
  detail::finish_write(out, path);
}

inline Graph load_adjacency_csv(const std::string& path) {
  const auto lines = detail::read_content_lines(path);
  const int n = static_cast<int>(lines.size());
  if (n == 0) throw ParseError(path + ": no adjacency rows");
  std::vector<std::vector<int>> cells(n);
  for (int i = 0; i < n; ++i) {
    const auto tokens = detail::split(lines[i].text, ',');
    if (static_cast<int>(tokens.size()) != n)
      throw ParseError(path + ":" + std::to_string(lines[i].number) +
                       ": row " + std::to_string(i) + " has " +
                       std::to_string(tokens.size()) + " columns, expected " +
                       std::to_string(n));
    for (int j = 0; j < n; ++j) {
      const std::string t = detail::trim(tokens[j]);
      if (t != "0" && t != "1")
        throw ParseError(path + ":" + std::to_string(lines[i].number) +
                         ": cell (" + std::to_string(i) + ", " +
                         std::to_string(j) + ") must be 0 or 1, got '" +
                         tokens[j] + "'");
      cells[i].push_back(t == "1");
    }
    if (cells[i][i] != 0)
      throw ParseError(path + ":" + std::to_string(lines[i].number) +
                       ": nonzero diagonal at cell (" + std::to_string(i) +
                       ", " + std::to_string(i) + ")");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (cells[i][j] != cells[j][i])
        throw ParseError(path + ":" + std::to_string(lines[i].number) +
                         ": asymmetric at cell (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");
  GraphBuilder g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (cells[i][j]) g.add(i, j);
  return g.take();
}

inline void save_edge_list_tsv(const Graph& g, const std::string& path) {
  auto out = detail::open_for_write(path);
  out << "# " << kFormatVersion << "\n";
  out << "n=" << g.node_count() << "\n";
  for (const auto& [u, v] : g.edges()) out << u << '\t' << v << '\n';
  detail::finish_write(out, path);
}

inline Graph load_edge_list_tsv(const std::string& path) {
  const auto lines = detail::read_content_lines(path);
  if (lines.empty()) throw ParseError(path + ": missing n=<count> header");
  const std::string& head = lines[0].text;
  if (head.rfind("n=", 0) != 0)
    throw ParseError(path + ":" + std::to_string(lines[0].number) +
                     ": expected n=<count> header, got '" + head + "'");
  const long long n =
      detail::parse_int(head.substr(2), path, lines[0].number);
  if (n <= 0)
    throw ParseError(path + ":" + std::to_string(lines[0].number) +
                     ": node count must be positive");
  GraphBuilder g(static_cast<int>(n));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto tokens = detail::split(lines[i].text, '\t');
    if (tokens.size() != 2)
      throw ParseError(path + ":" + std::to_string(lines[i].number) +
                       ": expected 'u<TAB>v'");
    const long long u = detail::parse_int(tokens[0], path, lines[i].number);
    const long long v = detail::parse_int(tokens[1], path, lines[i].number);
    try {
      g.add(static_cast<int>(u), static_cast<int>(v));
    } catch (const Error& e) {
      throw ParseError(path + ":" + std::to_string(lines[i].number) + ": " +
                       e.what());
    }
  }
  return g.take();
}

// Format by extension, falling back to content sniffing (an edge list
// always opens with its n=<count> header).
inline Graph load_graph(const std::string& path) {
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".csv") return load_adjacency_csv(path);
  if (ext == ".tsv") return load_edge_list_tsv(path);
  const auto lines = detail::read_content_lines(path);
  if (!lines.empty() && lines[0].text.rfind("n=", 0) == 0)
    return load_edge_list_tsv(path);
  return load_adjacency_csv(path);
}

// ------------------------------------------------------------- matrices

inline void save_distance_matrix_csv(const DistanceMatrix& d,
                                     const std::string& path) {
  auto out = detail::open_for_write(path);
  out << "# " << kFormatVersion << "\n";
  if (!d.metric.empty()) out << "# metric = " << d.metric << "\n";
  const Eigen::Index m = d.entries.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (i) out << ',';
    out << d.labels[i];
  }
  out << '\n';
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j) out << ',';
      out << detail::format_double(d.entries(i, j));
    }
    out << '\n';
  }
  detail::finish_write(out, path);
}

inline DistanceMatrix load_distance_matrix_csv(const std::string& path) {
  // Comment header keys ("# metric = ...") are data here, so re-scan raw.
  std::string metric;
  {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string raw;
    while (std::getline(in, raw)) {
      const std::string t = detail::trim(raw);
      if (t.empty()) continue;
      if (t[0] != '#') break;
      const auto eq = t.find('=');
      if (eq != std::string::npos) {
        const std::string key = detail::trim(t.substr(1, eq - 1));
        if (key == "metric") metric = detail::trim(t.substr(eq + 1));
      }
    }
  }
  const auto lines = detail::read_content_lines(path);
  if (lines.empty()) throw ParseError(path + ": empty matrix file");
  DistanceMatrix d;
  d.metric = metric;
  for (auto& label : detail::split(lines[0].text, ','))
    d.labels.push_back(detail::trim(label));
  const auto m = static_cast<Eigen::Index>(d.labels.size());
  if (static_cast<Eigen::Index>(lines.size()) != m + 1)
    throw ParseError(path + ": expected " + std::to_string(m) +
                     " value rows after the label row, got " +
                     std::to_string(lines.size() - 1));
  d.entries.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& line = lines[i + 1];
    const auto tokens = detail::split(line.text, ',');
    if (static_cast<Eigen::Index>(tokens.size()) != m)
      throw ParseError(path + ":" + std::to_string(line.number) + ": row " +
                       std::to_string(i) + " has " +
                       std::to_string(tokens.size()) + " columns, expected " +
                       std::to_string(m));
    for (Eigen::Index j = 0; j < m; ++j)
      d.entries(i, j) = detail::parse_double(tokens[j], path, line.number);
  }
  return d;
}

inline void save_similarity_matrix_csv(const SimilarityMatrix& s,
                                       std::span<const std::string> labels,
                                       const std::string& path) {
  if (static_cast<Eigen::Index>(labels.size()) != s.entries.rows())
    throw InputError("label count does not match similarity size");
  auto out = detail::open_for_write(path);
  out << "# " << kFormatVersion << "\n";
  out << "# sigma = " << detail::format_double(s.sigma) << "\n";
  if (!s.source_metric.empty())
    out << "# metric = " << s.source_metric << "\n";
  const Eigen::Index m = s.entries.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (i) out << ',';
    out << labels[i];
  }
  out << '\n';
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j) out << ',';
      out << detail::format_double(s.entries(i, j));
    }
    out << '\n';
  }
  detail::finish_write(out, path);
}

// -------------------------------------------------------------- clusters

inline void save_clusters_csv(std::span<const std::string> labels,
                              const ClusterAssignment& assignment,
                              const std::string& path) {
  if (labels.size() != assignment.labels.size())
    throw InputError("label count does not match assignment size");
  auto out = detail::open_for_write(path);
  out << "# " << kFormatVersion << "\n";
  out << "index,label,cluster\n";
  for (std::size_t i = 0; i < labels.size(); ++i)
    out << i << ',' << labels[i] << ',' << assignment.labels[i] << '\n';
  detail::finish_write(out, path);
}

// -------------------------------------------------------------- heatmaps

// Binary PPM with one 20x20 pixel block per matrix cell; smallest value
// maps to white, largest to black, a spread-free matrix to mid-gray.
inline void save_heatmap_ppm(const DistanceMatrix& d, const std::string& path,
                             int block = 20) {
  if (block < 1) throw InputError("block size must be positive");
  const Eigen::Index m = d.entries.rows();
  if (m == 0) throw InputError("empty matrix");
  const double lo = d.entries.minCoeff(), hi = d.entries.maxCoeff();
  auto out = detail::open_for_write(path, true);
  const int side = static_cast<int>(m) * block;
  out << "P6\n# " << kFormatVersion << "\n" << side << ' ' << side << "\n255\n";
  std::string row_bytes;
  for (Eigen::Index i = 0; i < m; ++i) {
    row_bytes.clear();
    for (Eigen::Index j = 0; j < m; ++j) {
      unsigned char gray = 128;
      if (hi > lo) {
        const double unit = (d.entries(i, j) - lo) / (hi - lo);
        gray = static_cast<unsigned char>(255.0 * (1.0 - unit) + 0.5);
      }
      row_bytes.append(static_cast<std::size_t>(3) * block,
                       static_cast<char>(gray));
    }
    for (int r = 0; r < block; ++r)
      out.write(row_bytes.data(), static_cast<std::streamsize>(row_bytes.size()));
  }
  detail::finish_write(out, path);
}

// --------------------------------------------------------------- bundles

// A bundle on disk is a directory: manifest.txt plus one adjacency CSV per
// graph, named by label.
inline void save_bundle(const ScenarioBundle& bundle, const std::string& dir) {
  if (bundle.graphs.empty()) throw InputError("empty bundle");
  if (bundle.graphs.size() != bundle.labels.size())
    throw InputError("bundle label count does not match graph count");
  if (!bundle.ground_truth.empty() &&
      bundle.ground_truth.size() != bundle.graphs.size())
    throw InputError("bundle ground_truth size does not match graph count");
  for (const auto& label : bundle.labels) detail::check_label(label);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "'");

  auto join = [](const auto& items) {
    std::ostringstream os;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) os << ',';
      os << items[i];
    }
    return os.str();
  };
  const std::string manifest = dir + "/manifest.txt";
  auto out = detail::open_for_write(manifest);
  out << "# " << kFormatVersion << "\n";
  out << "count = " << bundle.graphs.size() << "\n";
  out << "labels = " << join(bundle.labels) << "\n";
  if (!bundle.ground_truth.empty())
    out << "ground_truth = " << join(bundle.ground_truth) << "\n";
  if (!bundle.block_sizes.empty())
    out << "block_sizes = " << join(bundle.block_sizes) << "\n";
  detail::finish_write(out, manifest);

  for (std::size_t i = 0; i < bundle.graphs.size(); ++i)
    save_adjacency_csv(bundle.graphs[i], dir + "/" + bundle.labels[i] + ".csv");
}

inline ScenarioBundle load_bundle(const std::string& dir) {
  const std::string manifest = dir + "/manifest.txt";
  ScenarioBundle bundle;
  std::size_t count = 0;
  bool have_count = false;
  for (const auto& line : detail::read_content_lines(manifest)) {
    const auto eq = line.text.find('=');
    if (eq == std::string::npos)
      throw ParseError(manifest + ":" + std::to_string(line.number) +
                       ": expected key = value");
    const std::string key = detail::trim(line.text.substr(0, eq));
    const std::string value = detail::trim(line.text.substr(eq + 1));
    if (key == "count") {
      count = static_cast<std::size_t>(
          detail::parse_int(value, manifest, line.number));
      have_count = true;
    } else if (key == "labels") {
      for (auto& label : detail::split(value, ','))
        bundle.labels.push_back(detail::trim(label));
    } else if (key == "ground_truth") {
      for (auto& token : detail::split(value, ','))
        bundle.ground_truth.push_back(static_cast<int>(
            detail::parse_int(token, manifest, line.number)));
    } else if (key == "block_sizes") {
      for (auto& token : detail::split(value, ','))
        bundle.block_sizes.push_back(static_cast<int>(
            detail::parse_int(token, manifest, line.number)));
    } else {
      throw ParseError(manifest + ":" + std::to_string(line.number) +
                       ": unknown key '" + key + "'");
    }
  }
  if (!have_count || bundle.labels.empty())
    throw ParseError(manifest + ": needs count and labels entries");
  if (bundle.labels.size() != count)
    throw ParseError(manifest + ": count is " + std::to_string(count) +
                     " but " + std::to_string(bundle.labels.size()) +
                     " labels listed");
  if (!bundle.ground_truth.empty() && bundle.ground_truth.size() != count)
    throw ParseError(manifest + ": ground_truth size does not match count");
  for (const auto& label : bundle.labels) {
    detail::check_label(label);
    bundle.graphs.push_back(load_adjacency_csv(dir + "/" + label + ".csv"));
    if (bundle.graphs.back().node_count() !=
        bundle.graphs.front().node_count())
      throw ParseError(dir + ": graph '" + label +
                       "' has a different node count than the rest");
  }
  return bundle;
}

// ----------------------------------------------------------- run configs

struct RunConfig {
  std::string scenario;  // bridge41 | fixed42 | twosbm43 | custom
  std::uint64_t seed = 1;
  std::vector<Metric> metrics = {Metric::nld, Metric::gdd, Metric::hamming,
                                 Metric::frobenius};
  // Grid; when unset, the scenario's canonical grid applies
  // (fixed42: 4 / 400, otherwise 40 / 1200).
  std::optional<double> t_max;
  std::optional<int> n_samples;
  double p = 0.8;                            // fixed42 within-block prob
  double p11 = 0.75, p22 = 0.6, p12 = 0.04;  // bridge41 SBM parameters
  std::string output_dir = "netflow-out";
  std::string bundle_dir;  // custom scenario input

  double resolved_t_max() const {
    return t_max ? *t_max : (scenario == "fixed42" ? 4.0 : 40.0);
  }
  int resolved_n_samples() const {
    return n_samples ? *n_samples : (scenario == "fixed42" ? 400 : 1200);
  }

  void validate() const {
    if (scenario != "bridge41" && scenario != "fixed42" &&
        scenario != "twosbm43" && scenario != "custom")
      throw InputError("unknown scenario '" + scenario + "'");
    if (scenario == "custom" && bundle_dir.empty())
      throw InputError("custom scenario needs bundle_dir");
    if (metrics.empty()) throw InputError("metric set must not be empty");
    if (t_max && !(*t_max > 0.0)) throw InputError("t_max must be positive");
    if (n_samples && *n_samples < 2)
      throw InputError("n_samples must be at least 2");
    for (double prob : {p, p11, p22, p12})
      if (prob < 0.0 || prob > 1.0)
        throw InputError("probabilities must lie in [0, 1]");
  }
};

inline RunConfig parse_run_config(const std::string& path) {
  RunConfig cfg;
  bool have_scenario = false;
  for (const auto& line : detail::read_content_lines(path)) {
    const auto eq = line.text.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ":" + std::to_string(line.number) +
                       ": expected key = value");
    const std::string key = detail::trim(line.text.substr(0, eq));
    const std::string value = detail::trim(line.text.substr(eq + 1));
    if (key == "scenario") {
      cfg.scenario = value;
      have_scenario = true;
    } else if (key == "seed") {
      cfg.seed = detail::parse_uint64(value, path, line.number);
    } else if (key == "metrics") {
      cfg.metrics.clear();
      for (auto& token : detail::split(value, ',')) {
        try {
          cfg.metrics.push_back(metric_from_name(detail::trim(token)));
        } catch (const InputError& e) {
          throw ParseError(path + ":" + std::to_string(line.number) + ": " +
                           e.what());
        }
      }
    } else if (key == "t_max") {
      cfg.t_max = detail::parse_double(value, path, line.number);
    } else if (key == "n_samples") {
      cfg.n_samples =
          static_cast<int>(detail::parse_int(value, path, line.number));
    } else if (key == "p") {
      cfg.p = detail::parse_double(value, path, line.number);
    } else if (key == "p11") {
      cfg.p11 = detail::parse_double(value, path, line.number);
    } else if (key == "p22") {
      cfg.p22 = detail::parse_double(value, path, line.number);
    } else if (key == "p12") {
      cfg.p12 = detail::parse_double(value, path, line.number);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "bundle_dir") {
      cfg.bundle_dir = value;
    } else {
      throw ParseError(path + ":" + std::to_string(line.number) +
                       ": unknown key '" + key + "'");
    }
  }
  if (!have_scenario) throw ParseError(path + ": missing scenario");
  try {
    cfg.validate();
  } catch (const InputError& e) {
    throw ParseError(path + ": " + e.what());
  }
  return cfg;
}

}  // namespace netflow

#endif
