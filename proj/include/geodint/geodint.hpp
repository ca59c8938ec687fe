#pragma once

#include "geodint/analysis.hpp"
#include "geodint/chart.hpp"
#include "geodint/descriptor.hpp"
#include "geodint/errors.hpp"
#include "geodint/euclidean.hpp"
#include "geodint/fields.hpp"
#include "geodint/integrators.hpp"
#include "geodint/linalg.hpp"
#include "geodint/lognorm.hpp"
#include "geodint/reference.hpp"
#include "geodint/rng.hpp"
#include "geodint/solver.hpp"
#include "geodint/spd.hpp"
#include "geodint/sphere.hpp"
#include "geodint/tangent.hpp"
#include "geodint/tolerances.hpp"
