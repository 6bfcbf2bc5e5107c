#pragma once

#include "sawmap/analysis.hpp"
#include "sawmap/classical.hpp"
#include "sawmap/entanglement.hpp"
#include "sawmap/experiments.hpp"
#include "sawmap/gates.hpp"
#include "sawmap/io.hpp"
#include "sawmap/linear_fit.hpp"
#include "sawmap/map_params.hpp"
#include "sawmap/parallel.hpp"
#include "sawmap/qft.hpp"
#include "sawmap/rng.hpp"
#include "sawmap/sawtooth.hpp"
#include "sawmap/state_vector.hpp"
#include "sawmap/time_series.hpp"
#include "sawmap/version.hpp"
