#pragma once

#include "fsck/error.hpp"
#include "fsck/thermo_state.hpp"
#include "fsck/planck.hpp"
#include "fsck/spectra.hpp"
#include "fsck/quadrature.hpp"
#include "fsck/kdist.hpp"
#include "fsck/expint.hpp"
#include "fsck/lookup.hpp"
#include "fsck/mlp.hpp"
#include "fsck/train.hpp"
#include "fsck/tuner.hpp"
#include "fsck/dataset.hpp"
#include "fsck/rte.hpp"
#include "fsck/slab_models.hpp"
