#pragma once

#include "tailkit/binomial.hpp"
#include "tailkit/bootstrap.hpp"
#include "tailkit/bounds.hpp"
#include "tailkit/decomposition.hpp"
#include "tailkit/exact.hpp"
#include "tailkit/family_io.hpp"
#include "tailkit/harness.hpp"
#include "tailkit/indicator.hpp"
#include "tailkit/instances.hpp"
#include "tailkit/json_io.hpp"
#include "tailkit/kgraph.hpp"
#include "tailkit/monte_carlo.hpp"
#include "tailkit/numeric.hpp"
#include "tailkit/phi.hpp"
