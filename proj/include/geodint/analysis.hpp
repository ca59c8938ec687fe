#pragma once

#include "geodint/analysis/bifurcation.hpp"
#include "geodint/analysis/contraction.hpp"
#include "geodint/analysis/error_bound.hpp"
#include "geodint/analysis/karcher.hpp"
#include "geodint/analysis/sweep.hpp"
