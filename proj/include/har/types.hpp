#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace har {

/// Activity labels; the integer codes are stable and used for tie-breaking.
enum class Activity : int {
  Walking = 0,
  WalkingUpstairs = 1,
  WalkingDownstairs = 2,
  Running = 3,
  Jogging = 4,
};

inline constexpr std::size_t kActivityCount = 5;

inline constexpr std::array<Activity, kActivityCount> kAllActivities = {
    Activity::Walking, Activity::WalkingUpstairs, Activity::WalkingDownstairs,
    Activity::Running, Activity::Jogging};

constexpr int code(Activity a) noexcept { return static_cast<int>(a); }
constexpr std::size_t index(Activity a) noexcept {
  return static_cast<std::size_t>(a);
}
Activity activity_from_code(int code);

/// CSV label: walking, upstairs, downstairs, running, jogging.
std::string_view activity_label(Activity a) noexcept;
Activity parse_activity(std::string_view label);
/// Human-readable column title for tables.
std::string_view activity_title(Activity a) noexcept;

enum class SensorKind { Accelerometer, Gyroscope, Magnetometer };

inline constexpr std::array<SensorKind, 3> kAllSensors = {
    SensorKind::Accelerometer, SensorKind::Gyroscope, SensorKind::Magnetometer};

/// CSV label: accel, gyro, mag.
std::string_view sensor_label(SensorKind s) noexcept;
SensorKind parse_sensor(std::string_view label);

}  // namespace har
