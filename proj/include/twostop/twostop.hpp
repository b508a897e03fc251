// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "twostop/errors.hpp"
#include "twostop/extrema_law.hpp"
#include "twostop/model.hpp"
#include "twostop/monte_carlo.hpp"
#include "twostop/quadrature.hpp"
#include "twostop/smooth_pasting.hpp"
#include "twostop/stats.hpp"
#include "twostop/threshold.hpp"
#include "twostop/value_function.hpp"
