#pragma once

#include "toric/errors.hpp"
#include "toric/exact_linalg.hpp"
#include "toric/exact_lp.hpp"
#include "toric/polytope.hpp"
#include "toric/quadric_config.hpp"
#include "toric/torus_actions.hpp"
#include "toric/symplectic.hpp"
#include "toric/quadrature.hpp"
#include "toric/submanifold.hpp"
#include "toric/reduction_catalog.hpp"
#include "toric/report.hpp"
#include "toric/config.hpp"
#include "toric/cli.hpp"
