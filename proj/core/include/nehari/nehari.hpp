#pragma once

#include "nehari/energy.hpp"
#include "nehari/fibering.hpp"
#include "nehari/hypotheses.hpp"
#include "nehari/problem.hpp"
#include "nehari/radial_grid.hpp"
#include "nehari/sampling.hpp"
#include "nehari/solver.hpp"
