// Umbrella header for the simulation core.
#pragma once

#include "pbsim/evolve.hpp"
#include "pbsim/liouvillian.hpp"
#include "pbsim/observables.hpp"
#include "pbsim/operators.hpp"
#include "pbsim/steady_state.hpp"
#include "pbsim/sweep.hpp"
#include "pbsim/types.hpp"
#include "pbsim/version.hpp"
#include "pbsim/weak_drive.hpp"
