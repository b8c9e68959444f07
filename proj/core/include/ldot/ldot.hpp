#pragma once

#include "ldot/cost.hpp"
#include "ldot/coupling.hpp"
#include "ldot/csv.hpp"
#include "ldot/errors.hpp"
#include "ldot/exact.hpp"
#include "ldot/gibbs.hpp"
#include "ldot/ldp.hpp"
#include "ldot/matrix.hpp"
#include "ldot/measure.hpp"
#include "ldot/rate.hpp"
#include "ldot/scenarios.hpp"
#include "ldot/sinkhorn.hpp"
#include "ldot/support.hpp"
