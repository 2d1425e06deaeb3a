#pragma once

#include "loconc/bounds.hpp"
#include "loconc/charfun.hpp"
#include "loconc/concentration.hpp"
#include "loconc/dist_core.hpp"
#include "loconc/distribution.hpp"
#include "loconc/errors.hpp"
#include "loconc/extended_real.hpp"
#include "loconc/harness/experiment.hpp"
#include "loconc/harness/fit.hpp"
#include "loconc/harness/report.hpp"
#include "loconc/harness/suites.hpp"
#include "loconc/json_io.hpp"
#include "loconc/lattice.hpp"
#include "loconc/quadrature.hpp"
#include "loconc/random.hpp"
