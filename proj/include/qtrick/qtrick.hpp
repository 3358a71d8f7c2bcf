#pragma once

// Umbrella header for the whole library.

#include "qtrick/commands.hpp"
#include "qtrick/error.hpp"
#include "qtrick/exact_linalg.hpp"
#include "qtrick/finite_quotient.hpp"
#include "qtrick/four_squares.hpp"
#include "qtrick/generate.hpp"
#include "qtrick/instance.hpp"
#include "qtrick/matrix.hpp"
#include "qtrick/numbers.hpp"
#include "qtrick/polarized.hpp"
#include "qtrick/report.hpp"
#include "qtrick/ring_action.hpp"
#include "qtrick/selftest.hpp"
#include "qtrick/trick.hpp"
