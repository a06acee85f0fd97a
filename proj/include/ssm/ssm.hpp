#pragma once

// Umbrella header for the whole library.

#include "ssm/common.hpp"
#include "ssm/config.hpp"
#include "ssm/fourier.hpp"
#include "ssm/ifs.hpp"
#include "ssm/io.hpp"
#include "ssm/parallel.hpp"
#include "ssm/pipeline.hpp"
#include "ssm/pisot.hpp"
#include "ssm/polynomial.hpp"
#include "ssm/power_sums.hpp"
#include "ssm/rng.hpp"
#include "ssm/roots.hpp"
#include "ssm/sampling.hpp"
#include "ssm/slices.hpp"
#include "ssm/wiener.hpp"
