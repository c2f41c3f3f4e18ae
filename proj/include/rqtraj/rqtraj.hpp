#pragma once

// Relativistic quantum trajectory engine: reduced actions built from
// Klein-Gordon solution pairs, their conversion to particle trajectories,
// and the first-integral, node-law and limit checks that verify them.

#include "rqtraj/action.hpp"
#include "rqtraj/analytic.hpp"
#include "rqtraj/config.hpp"
#include "rqtraj/dynamics.hpp"
#include "rqtraj/errors.hpp"
#include "rqtraj/format.hpp"
#include "rqtraj/kleingordon.hpp"
#include "rqtraj/microstate.hpp"
#include "rqtraj/numeric.hpp"
#include "rqtraj/particle.hpp"
#include "rqtraj/potential.hpp"
#include "rqtraj/units.hpp"
#include "rqtraj/validation.hpp"
