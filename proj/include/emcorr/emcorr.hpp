#pragma once

#include "emcorr/error.hpp"
#include "emcorr/numerics.hpp"
#include "emcorr/sampling.hpp"
#include "emcorr/states.hpp"
#include "emcorr/bases.hpp"
#include "emcorr/correlators.hpp"
#include "emcorr/monotones.hpp"
#include "emcorr/estimation.hpp"
#include "emcorr/nonmono.hpp"
#include "emcorr/expsim.hpp"
