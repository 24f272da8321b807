#pragma once

#include "core_model.hpp"
#include "rng.hpp"
#include "topology.hpp"
#include "strategies.hpp"
#include "engine.hpp"
#include "analytic.hpp"
#include "harness/config.hpp"
#include "harness/csv.hpp"
#include "harness/experiments.hpp"
#include "harness/crosscheck.hpp"
#include "harness/trends.hpp"
