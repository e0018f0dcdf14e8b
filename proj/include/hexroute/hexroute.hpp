#pragma once

#include "hexroute/envmodel.hpp"
#include "hexroute/error.hpp"
#include "hexroute/geometry.hpp"
#include "hexroute/hexgrid.hpp"
#include "hexroute/io.hpp"
#include "hexroute/search.hpp"
#include "hexroute/smoothing.hpp"
#include "hexroute/square_grid.hpp"
#include "hexroute/svg.hpp"
#include "hexroute/tour.hpp"
