#pragma once

#include "v2g/branch_bound.hpp"
#include "v2g/build.hpp"
#include "v2g/common.hpp"
#include "v2g/feasibility.hpp"
#include "v2g/generators.hpp"
#include "v2g/instance.hpp"
#include "v2g/json_io.hpp"
#include "v2g/lp.hpp"
#include "v2g/metrics.hpp"
#include "v2g/model.hpp"
#include "v2g/mps.hpp"
#include "v2g/rng.hpp"
#include "v2g/scenario.hpp"
#include "v2g/simplex.hpp"
#include "v2g/sweep.hpp"
#include "v2g/transport.hpp"
#include "v2g/validate.hpp"
#include "v2g/version.hpp"
