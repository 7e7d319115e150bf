#pragma once

// Umbrella header.

#include "framed/assembly.hpp"
#include "framed/checks.hpp"
#include "framed/correspond.hpp"
#include "framed/delaunay.hpp"
#include "framed/divisor.hpp"
#include "framed/errors.hpp"
#include "framed/expr.hpp"
#include "framed/expr_jet.hpp"
#include "framed/expr_parse.hpp"
#include "framed/immersion.hpp"
#include "framed/inertia.hpp"
#include "framed/jet.hpp"
#include "framed/laurent.hpp"
#include "framed/mesh.hpp"
#include "framed/moebius.hpp"
#include "framed/monodromy.hpp"
#include "framed/null_lift.hpp"
#include "framed/point.hpp"
#include "framed/quadrature.hpp"
#include "framed/rational.hpp"
#include "framed/representations.hpp"
#include "framed/scene.hpp"
#include "framed/schwarzian.hpp"
#include "framed/schwarzian_series.hpp"
#include "framed/series.hpp"
#include "framed/spectral.hpp"
#include "framed/surface.hpp"
#include "framed/toml_lite.hpp"
