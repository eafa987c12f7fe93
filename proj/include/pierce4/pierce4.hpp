#pragma once

// Umbrella header.

#include "pierce4/geometry.hpp"
#include "pierce4/chord_profile.hpp"
#include "pierce4/approx.hpp"
#include "pierce4/transversal.hpp"
#include "pierce4/oracles.hpp"
#include "pierce4/piercing.hpp"
#include "pierce4/probe.hpp"
#include "pierce4/io.hpp"
#include "pierce4/svg.hpp"
