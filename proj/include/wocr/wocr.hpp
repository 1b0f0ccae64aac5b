#pragma once

// Umbrella header: the full weighted-orthogonal-components toolkit.

#include "wocr/benchmark.hpp"
#include "wocr/components.hpp"
#include "wocr/criteria.hpp"
#include "wocr/errors.hpp"
#include "wocr/io.hpp"
#include "wocr/model.hpp"
#include "wocr/rng.hpp"
#include "wocr/simulate.hpp"
#include "wocr/standardize.hpp"
#include "wocr/tuner.hpp"
#include "wocr/weights.hpp"
