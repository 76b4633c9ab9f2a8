#pragma once

#include "owl/weights.hpp"
#include "owl/norm.hpp"
#include "owl/prox.hpp"
#include "owl/solver.hpp"
