#pragma once

#include "fruiter/core.hpp"
#include "fruiter/errors.hpp"
#include "fruiter/fidelity.hpp"
#include "fruiter/harness.hpp"
#include "fruiter/json_io.hpp"
#include "fruiter/mappers.hpp"
#include "fruiter/report.hpp"
#include "fruiter/rng.hpp"
#include "fruiter/script.hpp"
#include "fruiter/stats.hpp"
#include "fruiter/utility.hpp"
