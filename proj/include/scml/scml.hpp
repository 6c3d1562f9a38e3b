/*******************************************************************************
 * Umbrella header for the signed graph clustering library.
 *
 * @file:   scml.hpp
 ******************************************************************************/
#pragma once

#include "scml/baselines.hpp"
#include "scml/clustering.hpp"
#include "scml/coarsening.hpp"
#include "scml/definitions.hpp"
#include "scml/graph.hpp"
#include "scml/io.hpp"
#include "scml/islands.hpp"
#include "scml/local_moves.hpp"
#include "scml/memetic.hpp"
#include "scml/multilevel.hpp"
#include "scml/refinement.hpp"
