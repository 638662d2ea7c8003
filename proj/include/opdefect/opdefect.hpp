#pragma once

// Umbrella header: the whole library in dependency order.

#include "opdefect/errors.hpp"
#include "opdefect/tolerances.hpp"
#include "opdefect/matrix.hpp"
#include "opdefect/rng.hpp"
#include "opdefect/linalg.hpp"
#include "opdefect/schur.hpp"
#include "opdefect/elementary.hpp"
#include "opdefect/classes.hpp"
#include "opdefect/structure.hpp"
#include "opdefect/generators.hpp"
#include "opdefect/verify.hpp"
#include "opdefect/report.hpp"
