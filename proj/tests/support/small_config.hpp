#pragma once

#include "pinnsird/pipeline/config.hpp"

namespace testing_support {

/// Eight synthetic weeks with tiny networks and few epochs: every stage
/// runs in well under a second.
inline pinnsird::pipeline::PipelineConfig small_pipeline_config() {
  pinnsird::pipeline::PipelineConfig c;
  c.seed = 3;
  c.synth_days = 56;
  c.daily_epochs = 60;
  c.daily_hidden = {8, 8};
  c.collocation_per_day = 1;
  c.daily_lr = 5e-3;
  c.weekly_epochs = 60;
  c.weekly_hidden = {8, 8};
  c.densify_points = 15;
  c.weekly_lr = 5e-3;
  c.forecast_epochs = 30;
  c.forecast_layers = 1;
  c.forecast_hidden = 8;
  c.forecast_lr = 5e-3;
  return c;
}

}  // namespace testing_support
