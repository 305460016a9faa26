#pragma once

// Umbrella header for the front-tracking two-phase surfactant solver.

#include "lcrm/advect.hpp"
#include "lcrm/bench.hpp"
#include "lcrm/config.hpp"
#include "lcrm/distance.hpp"
#include "lcrm/error.hpp"
#include "lcrm/field.hpp"
#include "lcrm/flow.hpp"
#include "lcrm/forces.hpp"
#include "lcrm/front.hpp"
#include "lcrm/grid.hpp"
#include "lcrm/indicator.hpp"
#include "lcrm/io.hpp"
#include "lcrm/parallel.hpp"
#include "lcrm/peskin.hpp"
#include "lcrm/poisson.hpp"
#include "lcrm/reconstruct.hpp"
#include "lcrm/simulation.hpp"
#include "lcrm/surfactant_bulk.hpp"
#include "lcrm/surfactant_surface.hpp"
#include "lcrm/vec3.hpp"
