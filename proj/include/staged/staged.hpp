#pragma once

#include "staged/analysis.hpp"
#include "staged/autodiff.hpp"
#include "staged/checkpoint.hpp"
#include "staged/common.hpp"
#include "staged/config.hpp"
#include "staged/dataset.hpp"
#include "staged/graph.hpp"
#include "staged/grn.hpp"
#include "staged/model.hpp"
#include "staged/pseudotime.hpp"
#include "staged/sim.hpp"
#include "staged/spatial.hpp"
#include "staged/train.hpp"
