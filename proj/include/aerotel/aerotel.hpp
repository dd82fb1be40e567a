#pragma once

#include "aerotel/apsk.hpp"
#include "aerotel/common.hpp"
#include "aerotel/discretize.hpp"
#include "aerotel/equalizer.hpp"
#include "aerotel/field.hpp"
#include "aerotel/geometry.hpp"
#include "aerotel/harness.hpp"
#include "aerotel/pulse.hpp"
#include "aerotel/reflection.hpp"
#include "aerotel/rng.hpp"
#include "aerotel/scenario.hpp"
