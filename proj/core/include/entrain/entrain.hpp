#pragma once

#include "entrain/blocks.hpp"
#include "entrain/diagnostics.hpp"
#include "entrain/error.hpp"
#include "entrain/io.hpp"
#include "entrain/lti.hpp"
#include "entrain/scenario.hpp"
#include "entrain/signals.hpp"
#include "entrain/solver.hpp"
