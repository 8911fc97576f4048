#pragma once

#include "pmth/attributes.hpp"
#include "pmth/behavior.hpp"
#include "pmth/engine.hpp"
#include "pmth/errors.hpp"
#include "pmth/goal_graph.hpp"
#include "pmth/htva.hpp"
#include "pmth/instruction.hpp"
#include "pmth/multitrace.hpp"
#include "pmth/policy.hpp"
#include "pmth/prng.hpp"
#include "pmth/scenario.hpp"
#include "pmth/service.hpp"
#include "pmth/switch_protocol.hpp"
#include "pmth/trace.hpp"
