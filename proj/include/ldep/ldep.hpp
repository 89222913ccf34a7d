#pragma once

// Precise dependence analysis for loops with variable-distance data
// dependences: exact LDE solving, iteration-space partitioning, seed-based
// component regeneration, schedule generation and randomized experiments.

#include "ldep/checked_math.hpp"
#include "ldep/errors.hpp"
#include "ldep/experiments.hpp"
#include "ldep/frontend.hpp"
#include "ldep/json_io.hpp"
#include "ldep/lde.hpp"
#include "ldep/multi_lde.hpp"
#include "ldep/nested.hpp"
#include "ldep/partition.hpp"
#include "ldep/scheduler.hpp"
