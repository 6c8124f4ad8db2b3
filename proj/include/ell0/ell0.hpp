#pragma once

#include "ell0/core.hpp"
#include "ell0/l0calc.hpp"
#include "ell0/oracle.hpp"
#include "ell0/problems.hpp"
#include "ell0/scalarize.hpp"
#include "ell0/solvers.hpp"
