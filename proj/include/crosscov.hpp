#pragma once

#include "crosscov/rational.hpp"
#include "crosscov/geometry.hpp"
#include "crosscov/planar_cone.hpp"
#include "crosscov/polygon.hpp"
#include "crosscov/intersect.hpp"
#include "crosscov/covariogram.hpp"
#include "crosscov/cones.hpp"
#include "crosscov/synisothesis.hpp"
#include "crosscov/catalog.hpp"
#include "crosscov/reconstruct.hpp"
