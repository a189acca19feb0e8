// Umbrella header.
#pragma once

#include "realind/ast.hpp"
#include "realind/errors.hpp"
#include "realind/eval.hpp"
#include "realind/interval.hpp"
#include "realind/kinematics.hpp"
#include "realind/ode.hpp"
#include "realind/oracles.hpp"
#include "realind/ordinal.hpp"
#include "realind/sweep.hpp"
#include "realind/syntax.hpp"
#include "realind/trace.hpp"
#include "realind/trace_json.hpp"
#include "realind/verify.hpp"
