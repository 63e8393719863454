#pragma once

// Umbrella header.

#include "selfspin/acceptance.hpp"
#include "selfspin/cli.hpp"
#include "selfspin/config.hpp"
#include "selfspin/densities.hpp"
#include "selfspin/io.hpp"
#include "selfspin/loglaurent.hpp"
#include "selfspin/mass_solver.hpp"
#include "selfspin/neutrino.hpp"
#include "selfspin/potentials.hpp"
#include "selfspin/proton.hpp"
#include "selfspin/quadrature.hpp"
#include "selfspin/rational.hpp"
#include "selfspin/series.hpp"
