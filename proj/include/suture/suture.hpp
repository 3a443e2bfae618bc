#pragma once

#include "suture/feasibility.hpp"
#include "suture/geometry.hpp"
#include "suture/metrics.hpp"
#include "suture/optimizer.hpp"
#include "suture/trajectory.hpp"
