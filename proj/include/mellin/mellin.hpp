#pragma once

#include "mellin/bounds.hpp"
#include "mellin/core.hpp"
#include "mellin/errors.hpp"
#include "mellin/quadrature.hpp"
#include "mellin/rng.hpp"
#include "mellin/sampling.hpp"
#include "mellin/serialize.hpp"
#include "mellin/spectral.hpp"
#include "mellin/synthesis.hpp"
