#pragma once

#include "cylapprox/basis.hpp"
#include "cylapprox/errors.hpp"
#include "cylapprox/fde.hpp"
#include "cylapprox/functionals.hpp"
#include "cylapprox/grid.hpp"
#include "cylapprox/harness.hpp"
#include "cylapprox/integral.hpp"
#include "cylapprox/projection.hpp"
#include "cylapprox/spectrum.hpp"
