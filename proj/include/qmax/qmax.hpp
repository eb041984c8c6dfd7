#pragma once

// Convenience header pulling in the whole library.

#include "qmax/errors.hpp"
#include "qmax/params.hpp"
#include "qmax/numerics.hpp"
#include "qmax/geo_analytic.hpp"
#include "qmax/rng.hpp"
#include "qmax/extreme_stats.hpp"
#include "qmax/geo_sim.hpp"
#include "qmax/mm_analytic.hpp"
#include "qmax/mmc_sim.hpp"
