#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "har/banks.hpp"
#include "har/ingest.hpp"

namespace har {

struct PipelineOptions {
  Bank bank = Bank::B70;
  std::size_t samples_per_window = 75;
  /// 0 disables the moving-average filter.
  std::size_t filter_order = 3;
  /// Only recordings of this sensor are used; nullopt keeps all of them.
  std::optional<SensorKind> sensor = SensorKind::Accelerometer;
  std::size_t threads = 1;
};

/// filter -> segment -> extract, preserving recording and window order.
FeatureSet build_feature_set(std::span<const Recording> recordings,
                             const PipelineOptions& options);

}  // namespace har
