#pragma once

// Umbrella header.

#include "stieltjes/criteria.hpp"
#include "stieltjes/errors.hpp"
#include "stieltjes/mellin.hpp"
#include "stieltjes/moment_sequence.hpp"
#include "stieltjes/principal_solutions.hpp"
#include "stieltjes/special_functions.hpp"
#include "stieltjes/stieltjes_classes.hpp"
#include "stieltjes/verification.hpp"
#include "stieltjes/weight_function.hpp"
