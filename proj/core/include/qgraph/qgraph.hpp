#pragma once

#include "qgraph/edge_state.hpp"
#include "qgraph/enumerate.hpp"
#include "qgraph/error.hpp"
#include "qgraph/evolve.hpp"
#include "qgraph/graph_io.hpp"
#include "qgraph/metric_graph.hpp"
#include "qgraph/oracle.hpp"
#include "qgraph/report_io.hpp"
#include "qgraph/spectral.hpp"
#include "qgraph/stability.hpp"
