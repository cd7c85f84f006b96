#pragma once

// Umbrella header.

#include "nilforms/alternating.hpp"
#include "nilforms/chains.hpp"
#include "nilforms/error.hpp"
#include "nilforms/expr.hpp"
#include "nilforms/extraction.hpp"
#include "nilforms/forms.hpp"
#include "nilforms/parser.hpp"
#include "nilforms/random.hpp"
#include "nilforms/scalar.hpp"
#include "nilforms/stokes.hpp"
#include "nilforms/sweep.hpp"
#include "nilforms/weil.hpp"
