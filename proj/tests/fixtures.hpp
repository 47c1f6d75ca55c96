#pragma once

// Test-side access to the shared scene generators.

#include "qgeom/generators.hpp"

namespace fx {

using namespace qgeom;
using namespace qgeom::gen;

}  // namespace fx
