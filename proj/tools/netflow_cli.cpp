// netflow: flow-based distances between graphs and the SBM scenarios
// built on top of them. See README.md for the file formats.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netflow/netflow.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitAssertion = 4;

struct DistArgs {
  std::string metric = "nld";
  double t_max = 40.0;
  int samples = 1200;
  std::string out;
  std::string bundle_dir;
  std::vector<std::string> graph_files;
};

int run_generate(const std::string& scenario, std::uint64_t seed,
                 const std::string& out, double p, double p11, double p22,
                 double p12) {
  netflow::ScenarioBundle bundle;
  if (scenario == "bridge41") {
    bundle = netflow::bridge_deletion_scenario(
        netflow::two_block_params(10, 10, p11, p22, p12), seed);
  } else if (scenario == "fixed42") {
    bundle = netflow::fixed_bridge_scenario(p, seed);
  } else if (scenario == "twosbm43") {
    bundle = netflow::two_sbm_scenario(seed);
  } else {
    throw netflow::InputError("unknown scenario '" + scenario +
                              "' (try bridge41, fixed42, twosbm43)");
  }
  netflow::save_bundle(bundle, out);
  std::cout << "wrote " << bundle.graphs.size() << " graphs to " << out
            << "\n";
  return kExitOk;
}

int run_dist(const DistArgs& args) {
  std::vector<netflow::Graph> graphs;
  std::vector<std::string> labels;
  if (!args.bundle_dir.empty()) {
    netflow::ScenarioBundle bundle = netflow::load_bundle(args.bundle_dir);
    graphs = std::move(bundle.graphs);
    labels = std::move(bundle.labels);
  } else {
    if (args.graph_files.size() < 2)
      throw netflow::InputError("need at least two graph files or --bundle");
    for (const auto& path : args.graph_files) {
      graphs.push_back(netflow::load_graph(path));
      labels.push_back(
          std::filesystem::path(path).stem().string());
    }
  }
  const netflow::Metric metric = netflow::metric_from_name(args.metric);
  std::optional<netflow::TimeGrid> grid;
  if (netflow::metric_needs_grid(metric))
    grid = netflow::make_time_grid(args.t_max, args.samples);
  const netflow::DistanceMatrix d = netflow::pairwise_distance_matrix(
      graphs, metric, grid, std::move(labels));
  netflow::save_distance_matrix_csv(d, args.out);
  std::cout << "wrote " << args.out << "\n";
  return kExitOk;
}

int run_cluster(const std::string& matrix_file, const std::string& method,
                int k, std::uint64_t seed, const std::string& out) {
  const netflow::DistanceMatrix d =
      netflow::load_distance_matrix_csv(matrix_file);
  netflow::ClusterAssignment assignment;
  if (method == "spectral") {
    assignment =
        netflow::spectral_cluster(netflow::similarity_matrix(d), k, seed);
  } else if (method == "kmeans") {
    assignment =
        netflow::kmeans(netflow::replace_diagonal_with_average(d), k, seed);
  } else {
    throw netflow::InputError("unknown method '" + method +
                              "' (try spectral, kmeans)");
  }
  netflow::save_clusters_csv(d.labels, assignment, out);
  std::cout << "wrote " << out << "\n";
  return kExitOk;
}

int run_heatmap(const std::string& matrix_file, const std::string& out) {
  netflow::save_heatmap_ppm(netflow::load_distance_matrix_csv(matrix_file),
                            out);
  std::cout << "wrote " << out << "\n";
  return kExitOk;
}

int run_reproduce(const std::string& config_file, const std::string& out,
                  std::optional<std::uint64_t> seed) {
  netflow::RunConfig cfg = netflow::parse_run_config(config_file);
  if (!out.empty()) cfg.output_dir = out;
  if (seed) cfg.seed = *seed;
  const netflow::ReproduceResult result = netflow::reproduce(cfg);
  std::cout << result.report;
  if (!result.assertions_passed()) {
    std::cerr << "scenario checks failed\n";
    return kExitAssertion;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flow-based network distances"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand(
      "generate", "sample a scenario bundle of SBM graphs");
  std::string gen_scenario = "bridge41", gen_out = "bundle";
  std::uint64_t gen_seed = 1;
  double gen_p = 0.8, gen_p11 = 0.75, gen_p22 = 0.6, gen_p12 = 0.04;
  generate->add_option("--scenario", gen_scenario,
                       "bridge41 | fixed42 | twosbm43");
  generate->add_option("--seed", gen_seed, "master seed");
  generate->add_option("--out", gen_out, "output bundle directory")
      ->required();
  generate->add_option("--p", gen_p, "fixed42 within-block probability");
  generate->add_option("--p11", gen_p11, "bridge41 block-1 probability");
  generate->add_option("--p22", gen_p22, "bridge41 block-2 probability");
  generate->add_option("--p12", gen_p12, "bridge41 inter-block probability");

  auto* dist = app.add_subcommand(
      "dist", "pairwise distance matrix for a set of graphs");
  DistArgs dist_args;
  dist->add_option("--metric", dist_args.metric,
                   "nld | gdd | hamming | frobenius");
  dist->add_option("--tmax", dist_args.t_max, "time horizon");
  dist->add_option("--samples", dist_args.samples, "grid subintervals");
  dist->add_option("--out", dist_args.out, "output CSV")->required();
  dist->add_option("--bundle", dist_args.bundle_dir,
                   "bundle directory instead of graph files");
  dist->add_option("graphs", dist_args.graph_files,
                   "graph files (adjacency .csv or edge-list .tsv)");

  auto* cluster =
      app.add_subcommand("cluster", "cluster a distance matrix CSV");
  std::string cl_matrix, cl_method = "spectral", cl_out = "clusters.csv";
  int cl_k = 2;
  std::uint64_t cl_seed = 1;
  cluster->add_option("matrix", cl_matrix, "distance matrix CSV")
      ->required();
  cluster->add_option("--method", cl_method, "spectral | kmeans");
  cluster->add_option("--k", cl_k, "number of clusters");
  cluster->add_option("--seed", cl_seed, "k-means seed");
  cluster->add_option("--out", cl_out, "output CSV");

  auto* heatmap =
      app.add_subcommand("heatmap", "render a distance matrix as PPM");
  std::string hm_matrix, hm_out = "heatmap.ppm";
  heatmap->add_option("matrix", hm_matrix, "distance matrix CSV")
      ->required();
  heatmap->add_option("--out", hm_out, "output PPM");

  auto* reproduce = app.add_subcommand(
      "reproduce", "run a full scenario pipeline from a config file");
  std::string rp_config, rp_out;
  std::optional<std::uint64_t> rp_seed;
  reproduce->add_option("--config", rp_config, "key = value config file")
      ->required();
  reproduce->add_option("--out", rp_out, "override output_dir");
  reproduce->add_option("--seed", rp_seed, "override seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints usage or the parse problem
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*generate)
      return run_generate(gen_scenario, gen_seed, gen_out, gen_p, gen_p11,
                          gen_p22, gen_p12);
    if (*dist) return run_dist(dist_args);
    if (*cluster)
      return run_cluster(cl_matrix, cl_method, cl_k, cl_seed, cl_out);
    if (*heatmap) return run_heatmap(hm_matrix, hm_out);
    if (*reproduce) return run_reproduce(rp_config, rp_out, rp_seed);
  } catch (const netflow::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const netflow::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const netflow::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
