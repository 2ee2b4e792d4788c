#pragma once

#include "symcap/error.hpp"
#include "symcap/linalg.hpp"
#include "symcap/symplectic_space.hpp"
#include "symcap/closed_curve.hpp"
#include "symcap/convex_body.hpp"
#include "symcap/characteristics.hpp"
#include "symcap/dual_solver.hpp"
#include "symcap/experiments.hpp"
#include "symcap/body_spec.hpp"
#include "symcap/report.hpp"
