#pragma once
#include "errors.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "hull.hpp"
#include "section.hpp"
#include "triangulation.hpp"
#include "hessian.hpp"
#include "rigidity.hpp"
#include "moves.hpp"
#include "catalog.hpp"
#include "io.hpp"
#include "analysis.hpp"
