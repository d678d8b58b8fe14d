#pragma once

// Umbrella header.

#include "eflab/asymptotics.hpp"
#include "eflab/common.hpp"
#include "eflab/corpus.hpp"
#include "eflab/equations.hpp"
#include "eflab/extreal.hpp"
#include "eflab/ode.hpp"
#include "eflab/report.hpp"
#include "eflab/run.hpp"
#include "eflab/scenario.hpp"
#include "eflab/series.hpp"
#include "eflab/theorems.hpp"
