#include "har/ingest.hpp"

#include <cmath>
#include <fstream>
#include <tuple>
#include <unordered_map>

#include "csv.hpp"
#include "har/error.hpp"

namespace har {

namespace {

struct GroupKey {
  std::string subject;
  std::string session;
  Activity activity;
  SensorKind sensor;

  bool operator==(const GroupKey&) const = default;
};

struct GroupKeyHash {
  std::size_t operator()(const GroupKey& k) const noexcept {
    std::size_t h = std::hash<std::string>{}(k.subject);
    h = h * 31 + std::hash<std::string>{}(k.session);
    h = h * 31 + static_cast<std::size_t>(k.activity);
    return h * 31 + static_cast<std::size_t>(k.sensor);
  }
};

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return in;
}

double parse_reading(std::string_view field, std::size_t line_no, const char* name) {
  const auto v = csv::parse_double(field);
  if (!v) {
    throw Error(ErrorCode::MalformedRow,
                std::string("column ") + name + " is not a number: '" + std::string(field) + "'",
                line_no);
  }
  if (!std::isfinite(*v)) {
    throw Error(ErrorCode::NonFiniteValue,
                std::string("column ") + name + " is not finite: '" + std::string(field) + "'",
                line_no);
  }
  return *v;
}

}  // namespace

std::vector<Recording> parse_recordings_csv(std::istream& in, double sample_rate_hz) {
  if (!(sample_rate_hz > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
  }
  std::string line;
  if (!csv::next_line(in, line) || line != kRecordingsHeader) {
    throw Error(ErrorCode::SchemaMismatch,
                "expected header '" + std::string(kRecordingsHeader) + "'", 1);
  }

  std::vector<Recording> out;
  std::unordered_map<GroupKey, std::size_t, GroupKeyHash> groups;
  std::size_t line_no = 1;
  while (csv::next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = csv::split(line);
    if (fields.size() != 8) {
      throw Error(ErrorCode::MalformedRow,
                  "expected 8 fields, found " + std::to_string(fields.size()), line_no);
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorCode::MalformedRow, "empty subject or session id", line_no);
    }
    Activity activity;
    SensorKind sensor;
    try {
      activity = parse_activity(fields[2]);
      sensor = parse_sensor(fields[3]);
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), line_no);
    }
    const auto t = csv::parse_int(fields[4]);
    if (!t) {
      throw Error(ErrorCode::MalformedRow,
                  "timestamp is not an integer: '" + std::string(fields[4]) + "'", line_no);
    }
    const Sample sample{*t, parse_reading(fields[5], line_no, "x"),
                        parse_reading(fields[6], line_no, "y"),
                        parse_reading(fields[7], line_no, "z")};

    GroupKey key{std::string(fields[0]), std::string(fields[1]), activity, sensor};
    auto [it, inserted] = groups.try_emplace(key, out.size());
    if (inserted) {
      out.push_back(Recording{key.subject, key.session, activity, sensor, sample_rate_hz, {}});
    }
    auto& samples = out[it->second].samples;
    if (!samples.empty() && sample.t_ms <= samples.back().t_ms) {
      throw Error(ErrorCode::NonMonotonicTimestamps,
                  "timestamp " + std::to_string(sample.t_ms) + " does not follow " +
                      std::to_string(samples.back().t_ms),
                  line_no);
    }
    samples.push_back(sample);
  }
  return out;
}

std::vector<Recording> parse_recordings_csv(const std::filesystem::path& path,
                                            double sample_rate_hz) {
  auto in = open_input(path);
  return parse_recordings_csv(in, sample_rate_hz);
}

void write_recordings_csv(std::ostream& out, std::span<const Recording> recordings) {
  out << kRecordingsHeader << '\n';
  for (const auto& rec : recordings) {
    csv::check_field(rec.subject_id);
    csv::check_field(rec.session_id);
    const auto activity = activity_label(rec.activity);
    const auto sensor = sensor_label(rec.sensor);
    for (const auto& s : rec.samples) {
      out << rec.subject_id << ',' << rec.session_id << ',' << activity << ',' << sensor << ','
          << s.t_ms << ',' << csv::format_double(s.x) << ',' << csv::format_double(s.y) << ','
          << csv::format_double(s.z) << '\n';
    }
  }
}

std::vector<SubjectMeta> parse_manifest_csv(std::istream& in) {
  std::string line;
  if (!csv::next_line(in, line) || line != kManifestHeader) {
    throw Error(ErrorCode::SchemaMismatch,
                "expected header '" + std::string(kManifestHeader) + "'", 1);
  }
  std::vector<SubjectMeta> out;
  std::size_t line_no = 1;
  while (csv::next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != 4 || f[0].empty()) {
      throw Error(ErrorCode::MalformedRow, "expected 4 fields", line_no);
    }
    SubjectMeta meta;
    meta.subject_id = std::string(f[0]);
    if (f[1] == "F") {
      meta.gender = Gender::F;
    } else if (f[1] == "M") {
      meta.gender = Gender::M;
    } else {
      throw Error(ErrorCode::MalformedRow, "gender must be F or M", line_no);
    }
    const auto age = csv::parse_int(f[2]);
    if (!age || *age <= 0) throw Error(ErrorCode::MalformedRow, "age must be positive", line_no);
    meta.age_years = static_cast<int>(*age);
    if (f[3] == "left") {
      meta.handedness = Handedness::Left;
    } else if (f[3] == "right") {
      meta.handedness = Handedness::Right;
    } else {
      throw Error(ErrorCode::MalformedRow, "handedness must be left or right", line_no);
    }
    for (const auto& existing : out) {
      if (existing.subject_id == meta.subject_id) {
        throw Error(ErrorCode::MalformedRow, "duplicate subject '" + meta.subject_id + "'",
                    line_no);
      }
    }
    out.push_back(std::move(meta));
  }
  return out;
}

std::vector<SubjectMeta> parse_manifest_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_manifest_csv(in);
}

void write_manifest_csv(std::ostream& out, std::span<const SubjectMeta> subjects) {
  out << kManifestHeader << '\n';
  for (const auto& s : subjects) {
    csv::check_field(s.subject_id);
    out << s.subject_id << ',' << (s.gender == Gender::F ? "F" : "M") << ',' << s.age_years
        << ',' << (s.handedness == Handedness::Left ? "left" : "right") << '\n';
  }
}

DatasetSummary dataset_summary(std::span<const Recording> recordings) {
  using Key = std::tuple<std::string, Activity, SensorKind>;
  std::map<Key, SummaryRow> rows;
  std::map<Activity, std::size_t> per_activity;
  std::size_t total = 0;
  for (const auto& rec : recordings) {
    auto& row = rows[Key{rec.subject_id, rec.activity, rec.sensor}];
    row.subject_id = rec.subject_id;
    row.activity = rec.activity;
    row.sensor = rec.sensor;
    row.sample_count += rec.samples.size();
    row.duration_s += static_cast<double>(rec.samples.size()) / rec.sample_rate_hz;
    per_activity[rec.activity] += rec.samples.size();
    total += rec.samples.size();
  }
  DatasetSummary summary;
  for (auto& [key, row] : rows) summary.rows.push_back(std::move(row));
  for (const auto& [activity, count] : per_activity) {
    summary.balance[activity] =
        total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
  }
  return summary;
}

}  // namespace har
