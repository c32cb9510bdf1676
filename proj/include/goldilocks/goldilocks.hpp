#pragma once

// Umbrella header for the Goldilocks residual-network library.

#include "goldilocks/activation.hpp"
#include "goldilocks/errors.hpp"
#include "goldilocks/harness.hpp"
#include "goldilocks/interpret.hpp"
#include "goldilocks/linalg.hpp"
#include "goldilocks/moments.hpp"
#include "goldilocks/network.hpp"
#include "goldilocks/odeflow.hpp"
#include "goldilocks/rng.hpp"
