#pragma once

#include "qwalk/scalar.hpp"
#include "qwalk/core.hpp"
#include "qwalk/oracle_sim.hpp"
#include "qwalk/horner.hpp"
#include "qwalk/spectral_sim.hpp"
#include "qwalk/closedform_pure.hpp"
#include "qwalk/closedform_mixed.hpp"
#include "qwalk/io.hpp"
#include "qwalk/verify.hpp"
