#pragma once

// Convenience umbrella for the whole library.

#include "coevo/coevolution.hpp"
#include "coevo/domination.hpp"
#include "coevo/evolution.hpp"
#include "coevo/games.hpp"
#include "coevo/harness.hpp"
#include "coevo/localsearch.hpp"
#include "coevo/metrics.hpp"
#include "coevo/surrogate.hpp"
#include "coevo/types.hpp"
