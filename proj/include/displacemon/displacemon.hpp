#pragma once

#include "displacemon/convergence.hpp"
#include "displacemon/core.hpp"
#include "displacemon/decoherence.hpp"
#include "displacemon/device.hpp"
#include "displacemon/hilbert.hpp"
#include "displacemon/phasespace.hpp"
#include "displacemon/protocol.hpp"
#include "displacemon/quadrature.hpp"
#include "displacemon/rng.hpp"
