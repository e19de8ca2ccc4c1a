#pragma once

#include "baselines.hpp"
#include "bench.hpp"
#include "cascade.hpp"
#include "common.hpp"
#include "generators.hpp"
#include "graph.hpp"
#include "greedy.hpp"
#include "reachability.hpp"
#include "rng.hpp"
#include "weight_reset.hpp"
