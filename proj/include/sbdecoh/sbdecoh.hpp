// sbdecoh.hpp - umbrella header

#pragma once

#include "bath_model.hpp"
#include "coherent_product.hpp"
#include "csv.hpp"
#include "density_matrix.hpp"
#include "dfs_analysis.hpp"
#include "fock_oracle.hpp"
#include "frequency_grid.hpp"
#include "modes.hpp"
#include "parallel.hpp"
#include "pulse_control.hpp"
