#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "har/types.hpp"

namespace har {

struct Sample {
  std::int64_t t_ms = 0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Sample&) const = default;
};

/// One subject performing one activity in one session, seen by one sensor.
/// Samples are non-empty, finite and strictly increasing in t_ms.
struct Recording {
  std::string subject_id;
  std::string session_id;
  Activity activity = Activity::Walking;
  SensorKind sensor = SensorKind::Accelerometer;
  double sample_rate_hz = 20.0;
  std::vector<Sample> samples;

  bool operator==(const Recording&) const = default;
};

enum class Gender { F, M };
enum class Handedness { Left, Right };

struct SubjectMeta {
  std::string subject_id;
  Gender gender = Gender::F;
  int age_years = 25;
  Handedness handedness = Handedness::Right;

  bool operator==(const SubjectMeta&) const = default;
};

inline constexpr std::string_view kRecordingsHeader =
    "subject_id,session_id,activity,sensor,timestamp_ms,x,y,z";
inline constexpr std::string_view kManifestHeader =
    "subject_id,gender,age_years,handedness";

/// Parses a recordings CSV. Rows are grouped by (subject, session, activity,
/// sensor) in order of first appearance; within a group timestamps must be
/// strictly increasing. Any bad row fails the whole parse.
std::vector<Recording> parse_recordings_csv(std::istream& in,
                                            double sample_rate_hz = 20.0);
std::vector<Recording> parse_recordings_csv(const std::filesystem::path& path,
                                            double sample_rate_hz = 20.0);

void write_recordings_csv(std::ostream& out, std::span<const Recording> recordings);

std::vector<SubjectMeta> parse_manifest_csv(std::istream& in);
std::vector<SubjectMeta> parse_manifest_csv(const std::filesystem::path& path);
void write_manifest_csv(std::ostream& out, std::span<const SubjectMeta> subjects);

// ---------------------------------------------------------------------------
// Synthetic data

/// Signal parameters of one activity, accelerometer units (m/s^2). Each axis
/// carries a DC level plus a fundamental and a second harmonic.
struct ActivityProfile {
  Activity activity;
  double cadence_hz;                  // fundamental frequency
  std::array<double, 3> amplitude;    // fundamental amplitude per axis
  std::array<double, 3> harmonic;     // second-harmonic amplitude per axis
  std::array<double, 3> offset;       // DC level per axis
  double noise_sd;                    // white measurement noise
};

/// Version tag of the pinned table below; bump when any constant changes.
inline constexpr int kSyntheticTableVersion = 2;

const std::array<ActivityProfile, kActivityCount>& synthetic_activity_table();

struct SynthParams {
  std::size_t n_subjects = 6;
  double minutes_per_activity = 10.0;
  double sample_rate_hz = 20.0;
  std::uint64_t seed = 7;
  /// Scales the per-subject cadence/amplitude/offset/phase deviations.
  double subject_variability = 1.0;
  /// Scales the stochastic parts: white noise and bout-to-bout jitter.
  double noise_scale = 1.0;
  std::vector<SensorKind> sensors = {kAllSensors.begin(), kAllSensors.end()};

  void validate() const;
};

struct SyntheticDataset {
  std::vector<Recording> recordings;
  std::vector<SubjectMeta> subjects;
};

/// Deterministic for a fixed seed: every (subject, activity, sensor) stream
/// draws from its own generator derived from the seed.
SyntheticDataset generate_synthetic(const SynthParams& params);

// ---------------------------------------------------------------------------
// Summary

struct SummaryRow {
  std::string subject_id;
  Activity activity;
  SensorKind sensor;
  std::size_t sample_count = 0;
  double duration_s = 0.0;
};

struct DatasetSummary {
  std::vector<SummaryRow> rows;               // sorted by (subject, activity, sensor)
  std::map<Activity, double> balance;         // share of all samples per activity
};

DatasetSummary dataset_summary(std::span<const Recording> recordings);

}  // namespace har
