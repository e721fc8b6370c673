#pragma once

#include "loadcast/common.hpp"
#include "loadcast/data/clean.hpp"
#include "loadcast/data/csv.hpp"
#include "loadcast/data/pipeline.hpp"
#include "loadcast/data/record.hpp"
#include "loadcast/data/scaler.hpp"
#include "loadcast/data/split.hpp"
#include "loadcast/data/synthetic.hpp"
#include "loadcast/data/window.hpp"
#include "loadcast/evo/benchmarks.hpp"
#include "loadcast/evo/de.hpp"
#include "loadcast/evo/ga.hpp"
#include "loadcast/evo/pso.hpp"
#include "loadcast/evo/types.hpp"
#include "loadcast/forecast/config.hpp"
#include "loadcast/forecast/io.hpp"
#include "loadcast/forecast/model.hpp"
#include "loadcast/forecast/rolling.hpp"
#include "loadcast/forecast/train.hpp"
#include "loadcast/metrics.hpp"
#include "loadcast/nn/layers.hpp"
#include "loadcast/nn/loss.hpp"
#include "loadcast/nn/tensor.hpp"
#include "loadcast/rng.hpp"
#include "loadcast/tune/cache.hpp"
#include "loadcast/tune/report.hpp"
#include "loadcast/tune/search_space.hpp"
#include "loadcast/tune/tuner.hpp"
