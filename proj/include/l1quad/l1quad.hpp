#pragma once

#include "l1quad/error.hpp"
#include "l1quad/geometry.hpp"
#include "l1quad/geometric_controller.hpp"
#include "l1quad/l1_controller.hpp"
#include "l1quad/plant.hpp"
#include "l1quad/signal.hpp"
#include "l1quad/trajectory.hpp"
