#pragma once

// Umbrella header: exact and expansion-based combination of independent
// weighted P-values, with the supporting numerics and oracles.

#include "pcomb/accumulate.hpp"
#include "pcomb/cluster.hpp"
#include "pcomb/compositions.hpp"
#include "pcomb/erlang.hpp"
#include "pcomb/exact.hpp"
#include "pcomb/expansion.hpp"
#include "pcomb/normalize.hpp"
#include "pcomb/oracle.hpp"
#include "pcomb/types.hpp"
