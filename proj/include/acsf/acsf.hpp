// Umbrella header.
#pragma once

#include "acsf/cyclic_tridiagonal.hpp"
#include "acsf/entropy.hpp"
#include "acsf/families.hpp"
#include "acsf/integrator.hpp"
#include "acsf/nelder_mead.hpp"
#include "acsf/polyline.hpp"
#include "acsf/radius.hpp"
#include "acsf/tangent.hpp"
