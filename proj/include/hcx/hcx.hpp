#pragma once

#include "hcx/cond_inf.hpp"
#include "hcx/convex_solver.hpp"
#include "hcx/correspondence.hpp"
#include "hcx/ext_real.hpp"
#include "hcx/finite_set.hpp"
#include "hcx/json_io.hpp"
#include "hcx/law_suite.hpp"
#include "hcx/quadratic_hidden.hpp"
