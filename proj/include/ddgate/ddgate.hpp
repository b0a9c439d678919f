#pragma once

#include "ddgate/linalg.hpp"
#include "ddgate/pulse_shapes.hpp"
#include "ddgate/pulse_library.hpp"
#include "ddgate/lattice.hpp"
#include "ddgate/patterns.hpp"
#include "ddgate/dcg.hpp"
#include "ddgate/noise.hpp"
#include "ddgate/schedule.hpp"
#include "ddgate/dynamics.hpp"
#include "ddgate/metrics.hpp"
#include "ddgate/qec.hpp"
