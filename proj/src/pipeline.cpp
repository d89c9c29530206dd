#include "har/pipeline.hpp"

#include "har/parallel.hpp"

namespace har {

FeatureSet build_feature_set(std::span<const Recording> recordings,
                             const PipelineOptions& options) {
  std::vector<const Recording*> selected;
  for (const auto& rec : recordings) {
    if (!options.sensor || rec.sensor == *options.sensor) selected.push_back(&rec);
  }
  std::vector<std::vector<Window>> per_recording(selected.size());
  parallel_for(selected.size(), options.threads, [&](std::size_t i) {
    const Recording& rec = *selected[i];
    per_recording[i] = options.filter_order > 0
                           ? segment_windows(filter_recording(rec, options.filter_order),
                                             options.samples_per_window)
                           : segment_windows(rec, options.samples_per_window);
  });
  std::vector<Window> windows;
  for (auto& ws : per_recording) {
    for (auto& w : ws) windows.push_back(std::move(w));
  }
  return extract_feature_set(windows, options.bank, options.threads);
}

}  // namespace har
