#pragma once

#include "hmf/analysis.hpp"
#include "hmf/config.hpp"
#include "hmf/convergence.hpp"
#include "hmf/dynamics.hpp"
#include "hmf/field.hpp"
#include "hmf/grid.hpp"
#include "hmf/io.hpp"
#include "hmf/penrose.hpp"
#include "hmf/stationary.hpp"
#include "hmf/volterra.hpp"
