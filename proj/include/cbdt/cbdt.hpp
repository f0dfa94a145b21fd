#pragma once

// Case-based decision engine: similarity from shortest-path distances on a
// discrete feature lattice, similarity-weighted utility maximization, space
// evolution under new information, and Poisson-rate wait-vs-act valuation.

#include "cbdt/axiom_checks.hpp"
#include "cbdt/case_memory.hpp"
#include "cbdt/decision.hpp"
#include "cbdt/feature_space.hpp"
#include "cbdt/lattice_oracle.hpp"
#include "cbdt/learning.hpp"
#include "cbdt/memory_io.hpp"
#include "cbdt/rational.hpp"
#include "cbdt/render.hpp"
#include "cbdt/scenario_io.hpp"
#include "cbdt/similarity.hpp"
