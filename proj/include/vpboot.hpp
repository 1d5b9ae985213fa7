#pragma once

// Umbrella header.

#include "vpboot/analysis.hpp"
#include "vpboot/errors.hpp"
#include "vpboot/experiments.hpp"
#include "vpboot/figures.hpp"
#include "vpboot/io.hpp"
#include "vpboot/linalg.hpp"
#include "vpboot/ordination.hpp"
#include "vpboot/parallel.hpp"
#include "vpboot/resample.hpp"
#include "vpboot/rng.hpp"
#include "vpboot/stats.hpp"
#include "vpboot/synth.hpp"
#include "vpboot/tables.hpp"
