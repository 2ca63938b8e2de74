#ifndef FRONTLAB_FRONTLAB_HPP
#define FRONTLAB_FRONTLAB_HPP

#include "frontlab/common.hpp"
#include "frontlab/reaction.hpp"
#include "frontlab/waves.hpp"
#include "frontlab/solver.hpp"
#include "frontlab/fronts.hpp"
#include "frontlab/stationary.hpp"
#include "frontlab/barriers.hpp"
#include "frontlab/phase.hpp"
#include "frontlab/harness.hpp"

#endif
