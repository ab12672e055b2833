#pragma once

#include "ringcap/acceptance.hpp"
#include "ringcap/capacity.hpp"
#include "ringcap/capmetric.hpp"
#include "ringcap/core.hpp"
#include "ringcap/geometry.hpp"
#include "ringcap/inequalities.hpp"
#include "ringcap/mappings.hpp"
#include "ringcap/report.hpp"
#include "ringcap/runner.hpp"
