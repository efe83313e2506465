#ifndef NETFLOW_NETFLOW_HPP
#define NETFLOW_NETFLOW_HPP

// Umbrella header: flow-based network distances, baseline graph metrics,
// SBM scenario generators, similarity clustering, and the file formats and
// pipeline used by the netflow CLI.

#include "netflow/clustering.hpp"
#include "netflow/errors.hpp"
#include "netflow/flow_distance.hpp"
#include "netflow/generators.hpp"
#include "netflow/graph.hpp"
#include "netflow/io.hpp"
#include "netflow/reproduce.hpp"
#include "netflow/rng.hpp"
#include "netflow/spectral.hpp"

#endif
