#pragma once

#include <string>

#include "hexroute/envmodel.hpp"
#include "hexroute/square_grid.hpp"
#include "support/oracles.hpp"

namespace fixtures {

inline hexroute::EnvModel hex_from(const oracle::Map& m)
{
    return hexroute::EnvModel(hexroute::HexLayout(0.0, 0.0, 1.0), m.rows, m.cols, m.nav);
}

inline hexroute::SquareModel square_from(const oracle::Map& m)
{
    return hexroute::SquareModel(hexroute::SquareLayout(0.0, 0.0, 1.0), m.rows, m.cols, m.nav);
}

inline oracle::Map open_map(int rows, int cols)
{
    return {rows, cols, std::vector<bool>(static_cast<std::size_t>(rows * cols), true)};
}

inline std::string data_path(const std::string& name) { return std::string(HEXROUTE_DATA_DIR) + "/" + name; }

}  // namespace fixtures
