#pragma once

#include "containerbench/combinatorics.hpp"
#include "containerbench/csp.hpp"
#include "containerbench/deg_leq_n.hpp"
#include "containerbench/errors.hpp"
#include "containerbench/experiment.hpp"
#include "containerbench/generators.hpp"
#include "containerbench/graph.hpp"
#include "containerbench/guarded.hpp"
#include "containerbench/hypergraph_containers.hpp"
#include "containerbench/io.hpp"
#include "containerbench/rational.hpp"
#include "containerbench/rng.hpp"
#include "containerbench/shrinking_search.hpp"
#include "containerbench/star_containers.hpp"
#include "containerbench/testers.hpp"
#include "containerbench/vertex_set.hpp"
