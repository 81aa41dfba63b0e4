#pragma once

#include "fdnet/analytic.hpp"
#include "fdnet/errors.hpp"
#include "fdnet/geometry.hpp"
#include "fdnet/montecarlo.hpp"
#include "fdnet/quadrature.hpp"
#include "fdnet/radio.hpp"
#include "fdnet/rate.hpp"
#include "fdnet/rng.hpp"
#include "fdnet/scenario.hpp"
