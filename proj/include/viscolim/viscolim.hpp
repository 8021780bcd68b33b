#pragma once

#include "viscolim/config.hpp"
#include "viscolim/eigensolver.hpp"
#include "viscolim/error.hpp"
#include "viscolim/export.hpp"
#include "viscolim/harness.hpp"
#include "viscolim/matching.hpp"
#include "viscolim/oracles.hpp"
#include "viscolim/oscillator_basis.hpp"
#include "viscolim/potential.hpp"
#include "viscolim/quadrature.hpp"
#include "viscolim/resonance_direct.hpp"
