#pragma once

#include "ldev/brute_force.hpp"
#include "ldev/bulk_density.hpp"
#include "ldev/checks.hpp"
#include "ldev/ensemble.hpp"
#include "ldev/error.hpp"
#include "ldev/exact_density.hpp"
#include "ldev/fluctuation.hpp"
#include "ldev/large_deviation.hpp"
#include "ldev/log_value.hpp"
#include "ldev/oracles.hpp"
#include "ldev/orthopoly.hpp"
#include "ldev/quadrature.hpp"
#include "ldev/ratio_table.hpp"
#include "ldev/recurrence.hpp"
#include "ldev/sampler.hpp"
#include "ldev/scaled_float.hpp"
#include "ldev/soft_edge.hpp"
#include "ldev/tridiagonal.hpp"
