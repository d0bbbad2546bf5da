#pragma once

#include "sparserec/errors.hpp"
#include "sparserec/harness.hpp"
#include "sparserec/io.hpp"
#include "sparserec/metrics.hpp"
#include "sparserec/operators.hpp"
#include "sparserec/rng.hpp"
#include "sparserec/signals.hpp"
#include "sparserec/solvers.hpp"
#include "sparserec/thresholding.hpp"
#include "sparserec/transforms.hpp"
