#include <cmath>
#include <numbers>
#include <random>

#include "har/error.hpp"
#include "har/ingest.hpp"
#include "har/numeric.hpp"

namespace har {

namespace {

// Version 2 of the activity table. Values are accelerometer readings at the
// wrist in m/s^2; y carries most of gravity.
constexpr std::array<ActivityProfile, kActivityCount> kTable = {{
    {Activity::Walking, 1.00, {2.0, 1.5, 1.0}, {0.6, 0.5, 0.3}, {1.0, 9.0, 2.0}, 0.35},
    {Activity::WalkingUpstairs, 0.85, {1.6, 2.0, 1.4}, {0.8, 0.7, 0.5}, {2.4, 8.0, 3.0}, 0.35},
    {Activity::WalkingDownstairs, 1.10, {2.6, 2.2, 1.8}, {1.0, 0.9, 0.7}, {0.2, 9.8, 1.2}, 0.40},
    {Activity::Running, 1.50, {6.5, 5.5, 4.0}, {2.0, 1.8, 1.2}, {3.6, 6.4, 4.6}, 0.60},
    {Activity::Jogging, 1.30, {4.6, 3.8, 3.0}, {1.4, 1.2, 0.9}, {2.6, 7.4, 3.8}, 0.50},
}};

// Fixed inter-axis phase lags of the fundamental.
constexpr std::array<double, 3> kAxisPhase = {0.0, std::numbers::pi / 3, 2 * std::numbers::pi / 3};

// Per-subject deviations (multiplied by subject_variability).
constexpr double kSubjectCadenceSd = 0.04;
constexpr double kSubjectAmplitudeSd = 0.08;
constexpr double kSubjectOffsetSd = 0.2;
constexpr double kSubjectHarmonicPhaseScale = 0.3;

// Within-recording bouts: every kBoutSeconds the cadence, intensity, posture
// and waveform shape are re-drawn around the subject's values (multiplied by
// noise_scale). The vertical posture barely moves.
constexpr double kBoutSeconds = 15.0;
constexpr double kBoutCadenceSd = 0.06;
constexpr double kBoutAmplitudeSd = 0.5;
constexpr std::array<double, 3> kBoutOffsetSd = {1.0, 0.2, 1.0};
constexpr double kBoutHarmonicPhaseSd = 1.2;

// How each sensor sees the same motion: gain on the oscillation, gain on the
// posture offset, constant bias, and a phase lead.
struct SensorTransform {
  double gain;
  double offset_gain;
  std::array<double, 3> bias;
  double phase;
};

constexpr SensorTransform transform_for(SensorKind s) {
  switch (s) {
    case SensorKind::Accelerometer: return {1.0, 1.0, {0.0, 0.0, 0.0}, 0.0};
    case SensorKind::Gyroscope: return {0.35, 0.02, {0.0, 0.0, 0.0}, std::numbers::pi / 2};
    case SensorKind::Magnetometer: return {0.8, 0.5, {22.0, -14.0, 38.0}, 0.0};
  }
  return {1.0, 1.0, {0.0, 0.0, 0.0}, 0.0};
}

struct SubjectStyle {
  double cadence = 1.0;
  std::array<double, 3> amplitude{1.0, 1.0, 1.0};
  std::array<double, 3> offset{};
  std::array<double, 3> phase{};
  std::array<double, 3> harmonic_phase{};
};

SubjectStyle draw_style(std::uint64_t seed, std::size_t subject, Activity activity,
                        double variability) {
  std::mt19937_64 rng(mix_seed(seed, 1000 + subject * kActivityCount + index(activity)));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  SubjectStyle style;
  style.cadence = 1.0 + variability * kSubjectCadenceSd * normal(rng);
  for (std::size_t a = 0; a < 3; ++a) {
    style.amplitude[a] = 1.0 + variability * kSubjectAmplitudeSd * normal(rng);
    style.offset[a] = variability * kSubjectOffsetSd * normal(rng);
    style.phase[a] = variability * angle(rng);
    style.harmonic_phase[a] = kSubjectHarmonicPhaseScale * variability * angle(rng);
  }
  return style;
}

Recording synthesize(const SynthParams& p, std::size_t subject, const std::string& subject_id,
                     const ActivityProfile& profile, SensorKind sensor) {
  const SubjectStyle style = draw_style(p.seed, subject, profile.activity, p.subject_variability);
  const SensorTransform tf = transform_for(sensor);
  const std::uint64_t stream =
      (subject * kActivityCount + index(profile.activity)) * kAllSensors.size() +
      static_cast<std::size_t>(sensor);
  std::mt19937_64 rng(mix_seed(p.seed, stream));
  std::normal_distribution<double> normal(0.0, 1.0);

  const auto n = static_cast<std::size_t>(std::llround(p.minutes_per_activity * 60.0 * p.sample_rate_hz));
  const auto bout_len =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(kBoutSeconds * p.sample_rate_hz)));

  Recording rec;
  rec.subject_id = subject_id;
  rec.session_id = "1";
  rec.activity = profile.activity;
  rec.sensor = sensor;
  rec.sample_rate_hz = p.sample_rate_hz;
  rec.samples.reserve(n);

  double phase = 0.0;
  double bout_cadence = 1.0;
  double bout_amplitude = 1.0;
  std::array<double, 3> bout_offset{};
  std::array<double, 3> bout_shape{};
  for (std::size_t i = 0; i < n; ++i) {
    if (i % bout_len == 0) {
      bout_cadence = 1.0 + p.noise_scale * kBoutCadenceSd * normal(rng);
      bout_amplitude = 1.0 + p.noise_scale * kBoutAmplitudeSd * normal(rng);
      for (std::size_t a = 0; a < 3; ++a) {
        bout_offset[a] = p.noise_scale * kBoutOffsetSd[a] * normal(rng);
        bout_shape[a] = p.noise_scale * kBoutHarmonicPhaseSd * normal(rng);
      }
    }
    std::array<double, 3> v{};
    for (std::size_t a = 0; a < 3; ++a) {
      const double fundamental = std::sin(phase + kAxisPhase[a] + style.phase[a] + tf.phase);
      const double harmonic = std::sin(2.0 * phase + style.harmonic_phase[a] + bout_shape[a] + tf.phase);
      const double oscillation = style.amplitude[a] * bout_amplitude *
                                 (profile.amplitude[a] * fundamental + profile.harmonic[a] * harmonic);
      const double posture = profile.offset[a] + style.offset[a] + bout_offset[a];
      v[a] = tf.bias[a] + tf.offset_gain * posture + tf.gain * oscillation +
             tf.gain * p.noise_scale * profile.noise_sd * normal(rng);
    }
    const auto t_ms = static_cast<std::int64_t>(
        std::llround(static_cast<double>(i) * 1000.0 / p.sample_rate_hz));
    rec.samples.push_back(Sample{t_ms, v[0], v[1], v[2]});
    phase += 2.0 * std::numbers::pi * profile.cadence_hz * style.cadence * bout_cadence /
             p.sample_rate_hz;
  }
  return rec;
}

}  // namespace

const std::array<ActivityProfile, kActivityCount>& synthetic_activity_table() { return kTable; }

void SynthParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (n_subjects == 0) fail("n_subjects must be positive");
  if (!(minutes_per_activity > 0.0) || !std::isfinite(minutes_per_activity)) {
    fail("minutes_per_activity must be positive");
  }
  if (!(sample_rate_hz > 0.0) || sample_rate_hz > 1000.0) {
    fail("sample_rate_hz must be in (0, 1000]");
  }
  if (!(subject_variability >= 0.0) || !std::isfinite(subject_variability)) {
    fail("subject_variability must be non-negative");
  }
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) fail("noise_scale must be non-negative");
  if (sensors.empty()) fail("at least one sensor is required");
  if (std::llround(minutes_per_activity * 60.0 * sample_rate_hz) < 1) {
    fail("recordings would be empty");
  }
}

SyntheticDataset generate_synthetic(const SynthParams& params) {
  params.validate();
  SyntheticDataset out;
  std::mt19937_64 meta_rng(mix_seed(params.seed, 0xfeed));
  std::uniform_int_distribution<int> age(19, 34);
  std::bernoulli_distribution left_handed(0.1);
  for (std::size_t s = 0; s < params.n_subjects; ++s) {
    char id[16];
    std::snprintf(id, sizeof id, "s%02zu", s + 1);
    SubjectMeta meta;
    meta.subject_id = id;
    meta.gender = s % 2 == 0 ? Gender::F : Gender::M;
    meta.age_years = age(meta_rng);
    meta.handedness = left_handed(meta_rng) ? Handedness::Left : Handedness::Right;
    out.subjects.push_back(meta);
    for (const auto& profile : kTable) {
      for (SensorKind sensor : params.sensors) {
        out.recordings.push_back(synthesize(params, s, meta.subject_id, profile, sensor));
      }
    }
  }
  return out;
}

}  // namespace har
