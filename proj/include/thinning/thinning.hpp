#pragma once

#include "thinning/agglomerative.hpp"
#include "thinning/bench.hpp"
#include "thinning/core.hpp"
#include "thinning/divisive.hpp"
#include "thinning/grid.hpp"
#include "thinning/pipeline.hpp"
