#pragma once

#include "coin.hpp"
#include "edge_map.hpp"
#include "error.hpp"
#include "evolution.hpp"
#include "experiments.hpp"
#include "init_spec.hpp"
#include "io.hpp"
#include "lattice.hpp"
#include "soliton.hpp"
