#pragma once

#include "graphalloc/environment.hpp"
#include "graphalloc/error.hpp"
#include "graphalloc/harness.hpp"
#include "graphalloc/metrics.hpp"
#include "graphalloc/model.hpp"
#include "graphalloc/objective.hpp"
#include "graphalloc/oracle.hpp"
#include "graphalloc/ordering.hpp"
#include "graphalloc/policy.hpp"
#include "graphalloc/preferences.hpp"
#include "graphalloc/problems.hpp"
#include "graphalloc/random.hpp"
#include "graphalloc/scalarization.hpp"
