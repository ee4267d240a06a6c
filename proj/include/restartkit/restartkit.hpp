#pragma once

#include "restartkit/dynamics.hpp"
#include "restartkit/experiments.hpp"
#include "restartkit/export.hpp"
#include "restartkit/generators.hpp"
#include "restartkit/momentum.hpp"
#include "restartkit/objectives.hpp"
#include "restartkit/restart.hpp"
#include "restartkit/rng.hpp"
#include "restartkit/serialize.hpp"
#include "restartkit/solvers.hpp"
#include "restartkit/trace.hpp"
