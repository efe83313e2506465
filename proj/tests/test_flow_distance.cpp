#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "netflow/flow_distance.hpp"
#include "netflow/generators.hpp"
#include "netflow/rng.hpp"

using namespace netflow;

namespace {

Graph sbm_draw(std::uint64_t seed) {
  return sample_sbm(two_block_params(10, 10, 0.75, 0.6, 0.04), seed);
}

const Graph k2 = Graph::from_edge_list(2, std::vector<std::pair<int, int>>{
                                              {0, 1}});
const Graph empty2(2);

}  // namespace

TEST_SUITE_BEGIN("flow_distance");

TEST_CASE("time grid: n subintervals, n + 1 points, exact endpoints") {
  const TimeGrid g = make_time_grid(1.0, 2);
  CHECK(g.samples == std::vector<double>{0.0, 0.5, 1.0});
  const TimeGrid fine = make_time_grid(40.0, 1200);
  CHECK(fine.samples.size() == 1201);
  CHECK(fine.samples.front() == 0.0);
  CHECK(fine.samples.back() == 40.0);
  const double step = 40.0 / 1200.0;
  for (std::size_t k = 1; k < fine.samples.size(); ++k)
    CHECK(std::abs(fine.samples[k] - fine.samples[k - 1] - step) <= 1e-12);
  CHECK_THROWS_AS(make_time_grid(0.0, 10), InputError);
  CHECK_THROWS_AS(make_time_grid(-1.0, 10), InputError);
  CHECK_THROWS_AS(make_time_grid(1.0, 1), InputError);
}

TEST_CASE("kernel difference closed form: 2-path vs empty pair") {
  const Spectrum s1 = eigendecompose(k2);
  const Spectrum s2 = eigendecompose(empty2);
  for (double t : {0.5, 2.0}) {
    const Eigen::MatrixXd d = kernel_difference(s1, s2, t);
    const double off = (1.0 - std::exp(-2.0 * t)) / 2.0;
    CHECK(d(0, 1) == doctest::Approx(off).epsilon(1e-12));
    CHECK(d(0, 0) == doctest::Approx(-off).epsilon(1e-12));
  }
  CHECK(kernel_difference(s1, s1, 1.0).cwiseAbs().maxCoeff() == 0.0);
  const Spectrum s3 = eigendecompose(Graph(3));
  CHECK_THROWS_AS(kernel_difference(s1, s3, 1.0), DimensionError);
}

TEST_CASE("off-diagonal absolute sum") {
  Eigen::MatrixXd m(2, 2);
  m << 5.0, 1.0, -2.0, 7.0;
  CHECK(off_diagonal_abs_sum(m) == 3.0);
  CHECK(off_diagonal_abs_sum(Eigen::MatrixXd::Zero(4, 4)) == 0.0);
}

TEST_CASE("flow distance of the 2-path against the empty graph") {
  // both off-diagonal entries of the difference grow monotonically, so the
  // grid total variation telescopes to exactly 1 - e^{-2 t_max}
  const TimeGrid grid = make_time_grid(40.0, 1200);
  const DistanceResult r = nld_distance(k2, empty2, grid);
  const double want = 1.0 - std::exp(-80.0);
  CHECK(std::abs(r.total - want) <= 1e-6);
  CHECK(r.per_node.size() == 2);
  CHECK(r.per_node[0] == doctest::Approx(want / 2.0).epsilon(1e-9));
  CHECK(r.per_node[1] == doctest::Approx(want / 2.0).epsilon(1e-9));
  CHECK(r.disconnected_input);  // the empty side has two components
}

TEST_CASE("flow distance basic axioms hold exactly") {
  const Graph a = sbm_draw(11), b = sbm_draw(12);
  const TimeGrid grid = make_time_grid(8.0, 200);
  // self distance: independently recomputed spectra, still exactly zero
  const DistanceResult self = nld_distance(a, a, grid);
  CHECK(self.total == 0.0);
  CHECK(self.per_node.cwiseAbs().maxCoeff() == 0.0);
  // swapping arguments negates every difference entrywise: bitwise equal
  const DistanceResult ab = nld_distance(a, b, grid);
  const DistanceResult ba = nld_distance(b, a, grid);
  CHECK(ab.total == ba.total);
  CHECK((ab.per_node - ba.per_node).cwiseAbs().maxCoeff() == 0.0);
  CHECK(ab.total > 0.0);
  CHECK_FALSE(ab.disconnected_input);
  // the off-diagonal split is exact
  CHECK(std::abs(ab.total - ab.per_node.sum()) <=
        1e-10 * std::max(1.0, ab.total));
}

TEST_CASE("flow distance triangle inequality on sampled triples") {
  const TimeGrid grid = make_time_grid(4.0, 100);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Spectrum a = eigendecompose(sbm_draw(derive_seed(70, seed)));
    const Spectrum b = eigendecompose(sbm_draw(derive_seed(71, seed)));
    const Spectrum c = eigendecompose(sbm_draw(derive_seed(72, seed)));
    const double ab = nld_distance(a, b, grid).total;
    const double ac = nld_distance(a, c, grid).total;
    const double cb = nld_distance(c, b, grid).total;
    CHECK(ab <= ac + cb + 1e-9);
    const double gab = gdd_distance(a, b, grid).value;
    const double gac = gdd_distance(a, c, grid).value;
    const double gcb = gdd_distance(c, b, grid).value;
    CHECK(gab <= gac + gcb + 1e-9);
  }
}

TEST_CASE("mismatched sizes are rejected") {
  const Graph small(3);
  const TimeGrid grid = make_time_grid(1.0, 10);
  CHECK_THROWS_AS(nld_distance(k2, small, grid), DimensionError);
  CHECK_THROWS_AS(gdd_distance(k2, small, grid), DimensionError);
  CHECK_THROWS_AS(nld_distance_oracle(k2, small, 1.0, 1), DimensionError);
}

TEST_CASE("quadrature oracle matches the closed form and the scheme") {
  const double want = 1.0 - std::exp(-80.0);
  CHECK(std::abs(nld_distance_oracle(k2, empty2, 40.0, 1) - want) <= 1e-6);
  CHECK_THROWS_AS(nld_distance_oracle(k2, empty2, 0.0, 1), InputError);
  CHECK_THROWS_AS(nld_distance_oracle(k2, empty2, 1.0, 0), InputError);

  const Graph a = sbm_draw(21), b = sbm_draw(22);
  const double scheme =
      nld_distance(a, b, make_time_grid(40.0, 1200)).total;
  const double oracle = nld_distance_oracle(a, b, 40.0, 2);
  CHECK(std::abs(scheme - oracle) / oracle < 0.01);
}

TEST_CASE("doubling the sample count barely moves the result") {
  const Graph a = sbm_draw(31), b = sbm_draw(32);
  const double coarse = nld_distance(a, b, make_time_grid(40.0, 1200)).total;
  const double fine = nld_distance(a, b, make_time_grid(40.0, 2400)).total;
  CHECK(std::abs(fine - coarse) / coarse < 0.005);
}

TEST_CASE("diffusion distance closed form on the 2-path pair") {
  // || exp(-tL) - I ||_F = 1 - e^{-2t}: increasing, so the max sits at t_max
  const TimeGrid grid = make_time_grid(3.0, 300);
  const GddResult r = gdd_distance(k2, empty2, grid);
  CHECK(r.value == doctest::Approx(1.0 - std::exp(-6.0)).epsilon(1e-12));
  CHECK(r.t_at_max == 3.0);
  const GddResult self = gdd_distance(k2, k2, grid);
  CHECK(self.value == 0.0);
  CHECK(self.t_at_max == 0.0);
}

TEST_CASE("diffusion distance is nondecreasing in the horizon") {
  double prev = 0.0;
  for (double t_max : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double v = gdd_distance(k2, empty2, make_time_grid(t_max, 64)).value;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("truncation guidance helper") {
  const Spectrum s1 = eigendecompose(k2);
  const Spectrum s2 = eigendecompose(empty2);
  // slowest surviving mode across the pair is the 2-path's lambda = 2
  CHECK(suggested_t_max(s1, s1, 1e-6) ==
        doctest::Approx(std::log(1e6) / 2.0).epsilon(1e-12));
  CHECK(suggested_t_max(s2, s2, 1e-6) == 0.0);  // nothing decays
  CHECK_THROWS_AS(suggested_t_max(s1, s2, 0.0), InputError);
  CHECK_THROWS_AS(suggested_t_max(s1, s2, 1.5), InputError);
}

TEST_CASE("pairwise distance matrix invariants per metric") {
  std::vector<Graph> graphs;
  for (std::uint64_t seed = 41; seed <= 44; ++seed)
    graphs.push_back(sbm_draw(seed));
  const TimeGrid grid = make_time_grid(4.0, 100);
  for (Metric metric : {Metric::nld, Metric::gdd, Metric::hamming,
                        Metric::frobenius}) {
    const DistanceMatrix d = pairwise_distance_matrix(
        graphs, metric, metric_needs_grid(metric)
                            ? std::optional<TimeGrid>(grid)
                            : std::nullopt);
    CHECK(d.metric == metric_name(metric));
    CHECK(d.labels == std::vector<std::string>{"G1", "G2", "G3", "G4"});
    CHECK(d.entries.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK((d.entries - d.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.entries.minCoeff() >= 0.0);
  }
}

TEST_CASE("pairwise distance matrix input errors") {
  std::vector<Graph> graphs{sbm_draw(1), sbm_draw(2)};
  CHECK_THROWS_AS(pairwise_distance_matrix(graphs, Metric::nld), InputError);
  CHECK_THROWS_AS(pairwise_distance_matrix(graphs, Metric::gdd), InputError);
  CHECK_THROWS_AS(
      pairwise_distance_matrix(graphs, Metric::hamming, std::nullopt,
                               {"only-one"}),
      InputError);
  std::vector<Graph> mixed{sbm_draw(1), Graph(5)};
  CHECK_THROWS_AS(pairwise_distance_matrix(mixed, Metric::hamming),
                  DimensionError);
  CHECK_THROWS_AS(
      pairwise_distance_matrix(std::vector<Graph>{}, Metric::hamming),
      InputError);
}

TEST_CASE("hamming matrix on one graph set matches direct calls") {
  std::vector<Graph> graphs{sbm_draw(51), sbm_draw(52), sbm_draw(53)};
  const DistanceMatrix d =
      pairwise_distance_matrix(graphs, Metric::hamming);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(d.entries(i, j) ==
            static_cast<double>(hamming_distance(graphs[i], graphs[j])));
}

TEST_CASE("metric names round trip") {
  for (Metric metric : {Metric::nld, Metric::gdd, Metric::hamming,
                        Metric::frobenius})
    CHECK(metric_from_name(metric_name(metric)) == metric);
  CHECK_THROWS_AS(metric_from_name("euclid"), InputError);
  CHECK(metric_needs_grid(Metric::nld));
  CHECK(metric_needs_grid(Metric::gdd));
  CHECK_FALSE(metric_needs_grid(Metric::hamming));
  CHECK_FALSE(metric_needs_grid(Metric::frobenius));
}

TEST_SUITE_END();
