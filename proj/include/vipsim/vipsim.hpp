#ifndef VIPSIM_VIPSIM_HPP_
#define VIPSIM_VIPSIM_HPP_

#include "vipsim/actual_plane.hpp"
#include "vipsim/baselines.hpp"
#include "vipsim/config.hpp"
#include "vipsim/congestion.hpp"
#include "vipsim/harness.hpp"
#include "vipsim/matrix.hpp"
#include "vipsim/metrics.hpp"
#include "vipsim/rng.hpp"
#include "vipsim/simulation.hpp"
#include "vipsim/topology.hpp"
#include "vipsim/traffic.hpp"
#include "vipsim/virtual_plane.hpp"

#endif
