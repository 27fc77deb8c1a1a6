#pragma once

#include "kontsevich/error.hpp"
#include "kontsevich/rational.hpp"
#include "kontsevich/exact_weights.hpp"
#include "kontsevich/propagator.hpp"
#include "kontsevich/quadrature.hpp"
#include "kontsevich/monte_carlo.hpp"
#include "kontsevich/jet.hpp"
#include "kontsevich/formal_geometry.hpp"
#include "kontsevich/operators.hpp"
#include "kontsevich/random_fixtures.hpp"
#include "kontsevich/jet_io.hpp"
