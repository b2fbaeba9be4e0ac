#pragma once

#include "coevo/config.hpp"
#include "coevo/experiment.hpp"
#include "coevo/report.hpp"
