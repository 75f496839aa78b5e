#pragma once

// Umbrella header for the numerical library (no CLI/report layer).

#include "blaschke.hpp"
#include "core.hpp"
#include "fourier.hpp"
#include "intertwine.hpp"
#include "model_space.hpp"
#include "operators.hpp"
#include "subspaces.hpp"
