#pragma once

#include "hyperlim/amalgam.hpp"
#include "hyperlim/counterexample.hpp"
#include "hyperlim/enumerate.hpp"
#include "hyperlim/errors.hpp"
#include "hyperlim/forest.hpp"
#include "hyperlim/gates.hpp"
#include "hyperlim/hyperbolicity.hpp"
#include "hyperlim/independence.hpp"
#include "hyperlim/isometry.hpp"
#include "hyperlim/metric_space.hpp"
#include "hyperlim/projection.hpp"
#include "hyperlim/rational.hpp"
#include "hyperlim/space_io.hpp"
#include "hyperlim/stage.hpp"
