#pragma once

#include "closerank/curvefit.hpp"
#include "closerank/edge_list.hpp"
#include "closerank/error.hpp"
#include "closerank/eval.hpp"
#include "closerank/graph.hpp"
#include "closerank/parallel.hpp"
#include "closerank/ranking.hpp"
#include "closerank/rng.hpp"
#include "closerank/synth.hpp"
#include "closerank/traversal.hpp"
