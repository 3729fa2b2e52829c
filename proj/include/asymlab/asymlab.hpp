#pragma once

#include "asymlab/bigreal.hpp"
#include "asymlab/cantor.hpp"
#include "asymlab/cascade.hpp"
#include "asymlab/errors.hpp"
#include "asymlab/ladder.hpp"
#include "asymlab/map.hpp"
#include "asymlab/roots.hpp"
#include "asymlab/scaling.hpp"
#include "asymlab/semiext.hpp"
