#include "har/types.hpp"

#include "har/error.hpp"

namespace har {

namespace {

constexpr std::array<std::string_view, kActivityCount> kActivityLabels = {
    "walking", "upstairs", "downstairs", "running", "jogging"};
constexpr std::array<std::string_view, kActivityCount> kActivityTitles = {
    "Walking", "Walking Up-Stairs", "Walking Down-Stairs", "Running", "Jogging"};
constexpr std::array<std::string_view, 3> kSensorLabels = {"accel", "gyro", "mag"};

}  // namespace

Activity activity_from_code(int c) {
  if (c < 0 || c >= static_cast<int>(kActivityCount)) {
    throw Error(ErrorCode::UnknownActivity, "activity code " + std::to_string(c));
  }
  return static_cast<Activity>(c);
}

std::string_view activity_label(Activity a) noexcept { return kActivityLabels[index(a)]; }

std::string_view activity_title(Activity a) noexcept { return kActivityTitles[index(a)]; }

Activity parse_activity(std::string_view label) {
  for (std::size_t i = 0; i < kActivityLabels.size(); ++i) {
    if (kActivityLabels[i] == label) return kAllActivities[i];
  }
  throw Error(ErrorCode::UnknownActivity, "unknown activity '" + std::string(label) + "'");
}

std::string_view sensor_label(SensorKind s) noexcept {
  return kSensorLabels[static_cast<std::size_t>(s)];
}

SensorKind parse_sensor(std::string_view label) {
  for (std::size_t i = 0; i < kSensorLabels.size(); ++i) {
    if (kSensorLabels[i] == label) return kAllSensors[i];
  }
  throw Error(ErrorCode::UnknownSensor, "unknown sensor '" + std::string(label) + "'");
}

}  // namespace har
