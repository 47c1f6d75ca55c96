#pragma once

// Everything at once.

#include "qgeom/errors.hpp"
#include "qgeom/liegroup.hpp"
#include "qgeom/geometry.hpp"
#include "qgeom/connections.hpp"
#include "qgeom/cylindrical.hpp"
#include "qgeom/weylops.hpp"
#include "qgeom/stratdiffeo.hpp"
#include "qgeom/estimates.hpp"
#include "qgeom/serialization.hpp"
#include "qgeom/generators.hpp"
#include "qgeom/suites.hpp"
