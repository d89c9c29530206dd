#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "har/error.hpp"

#ifndef HAR_VERSION
#define HAR_VERSION "dev"
#endif

namespace har::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Inputs {
  std::vector<std::pair<std::string, std::string>> digests;  // path, sha256

  void add(const std::filesystem::path& p) { digests.emplace_back(p.string(), sha256_file(p)); }
};

void write_manifest(const std::filesystem::path& output, const std::string& command, std::uint64_t seed,
                    json config, const Inputs& inputs, Clock::time_point started) {
  json m;
  m["toolkit"] = "har";
  m["version"] = HAR_VERSION;
  m["command"] = command;
  m["seed"] = seed;
  m["config"] = std::move(config);
  m["inputs"] = json::array();
  for (const auto& [path, digest] : inputs.digests) m["inputs"].push_back({{"path", path}, {"sha256", digest}});
  m["output"] = output.filename().string();
  m["duration_s"] = std::chrono::duration<double>(Clock::now() - started).count();
  auto path = output;
  path += ".manifest.json";
  write_atomic(path, m.dump(2) + "\n");
}

json model_json(const ModelSpec& spec) {
  json j;
  j["kind"] = model_label(spec.kind());
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, TreeParams>) j["max_splits"] = p.max_splits;
        if constexpr (std::is_same_v<P, NaiveBayesParams>) j["variance_floor"] = p.variance_floor;
        if constexpr (std::is_same_v<P, KnnParams>) j["k"] = p.k;
        if constexpr (std::is_same_v<P, SvmParams>) {
          j["c"] = p.c;
          j["tolerance"] = p.tolerance;
          j["iterations_per_instance"] = p.iterations_per_instance;
        }
        if constexpr (std::is_same_v<P, BaggingParams>) j["n_learners"] = p.n_learners;
      },
      spec.params);
  return j;
}

json config_json(const EvalConfig& c) {
  return json{{"model", model_json(c.model)},
              {"bank", bank_label(c.bank)},
              {"samples_per_window", c.samples_per_window},
              {"treatment", c.treatment.label()},
              {"protocol", protocol_label(c.protocol)},
              {"folds", c.folds},
              {"seed", c.seed},
              {"threads", c.threads},
              {"permute_columns", c.permute_columns},
              {"aggregation", aggregation_label(c.aggregation)}};
}

/// Seed precedence: flag, then HAR_SEED, then the command's default.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HAR_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t v = 0;
    const char* end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec != std::errc{} || ptr != end) {
      throw Error(ErrorCode::InvalidArgument, "HAR_SEED is not an unsigned integer: '" + std::string(env) + "'");
    }
    return v;
  }
  return fallback;
}

std::optional<SensorKind> parse_sensor_filter(const std::string& s) {
  if (s == "all") return std::nullopt;
  return parse_sensor(s);
}

std::string read_first_line(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

FeatureSet load_features(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return parse_features_csv(in);
}

std::vector<std::size_t> parse_sizes(const std::string& spec) {
  std::vector<std::size_t> sizes;
  auto number = [&](std::string_view s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::InvalidArgument, "bad window size '" + std::string(s) + "'");
    }
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::size_t> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(number(p));
    if (parts.size() != 3 || parts[2] == 0 || parts[0] > parts[1]) {
      throw Error(ErrorCode::InvalidArgument, "sizes range must be start:stop:step");
    }
    for (std::size_t s = parts[0]; s <= parts[1]; s += parts[2]) sizes.push_back(s);
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) sizes.push_back(number(p));
  }
  for (std::size_t s : sizes) {
    if (s < kMinWindowSamples) {
      throw Error(ErrorCode::InvalidArgument, "window size must be at least " + std::to_string(kMinWindowSamples));
    }
  }
  if (sizes.empty()) throw Error(ErrorCode::InvalidArgument, "no window sizes given");
  return sizes;
}

std::string csv_text(std::span<const ResultRow> rows) {
  std::ostringstream s;
  write_results_csv(s, rows);
  return s.str();
}

struct ModelFlags {
  std::optional<std::size_t> k;
  std::optional<std::size_t> max_splits;
  std::optional<std::size_t> learners;
  std::optional<double> svm_c;
  std::optional<double> svm_tol;

  void add(CLI::App* app) {
    app->add_option("--k", k, "KNN neighbours");
    app->add_option("--max-splits", max_splits, "Decision tree split budget");
    app->add_option("--learners", learners, "Bagging ensemble size");
    app->add_option("--svm-c", svm_c, "SVM box constraint");
    app->add_option("--svm-tol", svm_tol, "SVM KKT tolerance");
  }

  ModelSpec spec(ModelKind kind, std::uint64_t seed, std::size_t threads) const {
    ModelSpec s = ModelSpec::defaults(kind, seed);
    s.threads = threads;
    std::visit(
        [&](auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, TreeParams>) p.max_splits = max_splits.value_or(p.max_splits);
          if constexpr (std::is_same_v<P, KnnParams>) p.k = k.value_or(p.k);
          if constexpr (std::is_same_v<P, BaggingParams>) p.n_learners = learners.value_or(p.n_learners);
          if constexpr (std::is_same_v<P, SvmParams>) {
            p.c = svm_c.value_or(p.c);
            p.tolerance = svm_tol.value_or(p.tolerance);
          }
        },
        s.params);
    s.validate();
    return s;
  }
};

struct EvalFlags {
  std::string bank = "b";
  std::size_t window = 75;
  std::string protocol = "personal";
  std::string treatment = "nr-rp";
  std::size_t folds = 10;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  bool permute_columns = false;
  std::string aggregation = "unit-mean";
  std::size_t filter_order = 3;
  std::string sensor = "accel";
  double rate = 20.0;
  ModelFlags model;
  CLI::Option* bank_option = nullptr;

  void add(CLI::App* app) {
    bank_option = app->add_option("--bank", bank, "Feature bank: a (43) or b (70)")->check(CLI::IsMember({"a", "b"}));
    app->add_option("--protocol", protocol, "personal or impersonal")->check(CLI::IsMember({"personal", "impersonal"}));
    app->add_option("--treatment", treatment, "nr-rp, nr-nrp, unr-rp or unr-nrp")
        ->check(CLI::IsMember({"nr-rp", "nr-nrp", "unr-rp", "unr-nrp"}));
    app->add_option("--folds", folds, "Folds per subject for the personal protocol")->check(CLI::Range(2, 1000000));
    app->add_option("--seed", seed, "Seed (default: HAR_SEED or 0)");
    app->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 1024));
    app->add_flag("--permute-columns", permute_columns, "Also shuffle feature columns");
    app->add_option("--aggregation", aggregation, "Reported accuracy: unit-mean or pooled")
        ->check(CLI::IsMember({"unit-mean", "pooled"}));
    app->add_option("--filter-order", filter_order, "Moving-average order, 0 disables")->check(CLI::Range(0, 1000));
    app->add_option("--sensor", sensor, "accel, gyro, mag or all")->check(CLI::IsMember({"accel", "gyro", "mag", "all"}));
    app->add_option("--rate", rate, "Sample rate of recordings in Hz")->check(CLI::PositiveNumber);
    model.add(app);
  }

  EvalConfig config(ModelKind kind) const {
    EvalConfig c;
    c.seed = resolve_seed(seed, 0);
    c.model = model.spec(kind, c.seed, 1);
    c.bank = parse_bank(bank);
    c.samples_per_window = window;
    c.protocol = parse_protocol(protocol);
    c.treatment = Treatment::parse(treatment);
    c.folds = folds;
    c.threads = threads;
    c.permute_columns = permute_columns;
    c.aggregation = parse_aggregation(aggregation);
    return c;
  }

  PipelineOptions pipeline(const EvalConfig& c) const {
    PipelineOptions p;
    p.bank = c.bank;
    p.samples_per_window = c.samples_per_window;
    p.filter_order = filter_order;
    p.sensor = parse_sensor_filter(sensor);
    p.threads = threads;
    return p;
  }
};

int cmd_synth(const std::filesystem::path& dir, SynthParams params, const std::optional<std::uint64_t>& seed,
              const std::vector<std::string>& sensors, std::ostream& out) {
  const auto started = Clock::now();
  params.seed = resolve_seed(seed, params.seed);
  params.sensors.clear();
  for (const auto& s : sensors) params.sensors.push_back(parse_sensor(s));
  params.validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "'");

  const SyntheticDataset ds = generate_synthetic(params);
  std::ostringstream rec;
  write_recordings_csv(rec, ds.recordings);
  std::ostringstream subjects;
  write_manifest_csv(subjects, ds.subjects);
  write_atomic(dir / "recordings.csv", rec.str());
  write_atomic(dir / "subjects.csv", subjects.str());

  json cfg{{"n_subjects", params.n_subjects},
           {"minutes_per_activity", params.minutes_per_activity},
           {"sample_rate_hz", params.sample_rate_hz},
           {"subject_variability", params.subject_variability},
           {"noise_scale", params.noise_scale},
           {"sensors", sensors},
           {"table_version", kSyntheticTableVersion}};
  write_manifest(dir / "recordings.csv", "synth", params.seed, cfg, {}, started);
  out << "wrote " << ds.recordings.size() << " recordings for " << ds.subjects.size() << " subjects to "
      << dir.string() << '\n';
  return kOk;
}

int cmd_extract(const std::filesystem::path& input, const std::filesystem::path& output, const EvalFlags& f,
                std::ostream& out) {
  const auto started = Clock::now();
  EvalConfig c;
  c.bank = parse_bank(f.bank);
  c.samples_per_window = f.window;
  const auto recordings = parse_recordings_csv(input, f.rate);
  const FeatureSet fs = build_feature_set(recordings, f.pipeline(c));
  std::ostringstream text;
  write_features_csv(text, fs);
  write_atomic(output, text.str());
  Inputs inputs;
  inputs.add(input);
  write_manifest(output, "extract", 0,
                 json{{"bank", f.bank},
                      {"samples_per_window", f.window},
                      {"filter_order", f.filter_order},
                      {"sensor", f.sensor},
                      {"sample_rate_hz", f.rate}},
                 inputs, started);
  out << "wrote " << fs.size() << " feature vectors of width " << fs.values.cols() << " to " << output.string()
      << '\n';
  return kOk;
}

int cmd_eval(const std::filesystem::path& input, const std::filesystem::path& output,
             const std::optional<std::filesystem::path>& markdown, const std::string& model, const EvalFlags& f,
             std::ostream& out) {
  const auto started = Clock::now();
  EvalConfig c = f.config(parse_model_kind(model));
  FeatureSet fs;
  if (read_first_line(input) == kRecordingsHeader) {
    fs = build_feature_set(parse_recordings_csv(input, f.rate), f.pipeline(c));
  } else {
    fs = load_features(input);
    if (f.bank_option->count() > 0 && fs.bank != c.bank) {
      throw Error(ErrorCode::SchemaMismatch, "feature file holds bank " + std::string(bank_label(fs.bank)) +
                                                 " but --bank " + f.bank + " was requested");
    }
    c.bank = fs.bank;
  }
  const EvalReport report = evaluate(c, fs);
  const auto rows = report_rows(c, report);
  write_atomic(output, csv_text(rows));
  Inputs inputs;
  inputs.add(input);
  write_manifest(output, "eval", c.seed, config_json(c), inputs, started);
  const std::string md = report_markdown(c, report);
  if (markdown) {
    write_atomic(*markdown, md);
  } else {
    out << md;
  }
  return kOk;
}

int cmd_sweep(const std::filesystem::path& input, const std::filesystem::path& output,
              const std::optional<std::filesystem::path>& svg, const std::vector<std::string>& models,
              const std::string& sizes_spec, const EvalFlags& f, std::ostream& out) {
  const auto started = Clock::now();
  const auto sizes = parse_sizes(sizes_spec);
  const auto recordings = parse_recordings_csv(input, f.rate);
  std::vector<ResultRow> rows;
  json configs = json::array();
  std::uint64_t seed = 0;
  for (const auto& m : models) {
    const EvalConfig base = f.config(parse_model_kind(m));
    seed = base.seed;
    configs.push_back(config_json(base));
    const SweepResult sweep = window_sweep(base, recordings, sizes, f.pipeline(base));
    for (const auto& [size, report] : sweep) {
      EvalConfig c = base;
      c.samples_per_window = size;
      for (auto& r : report_rows(c, report)) rows.push_back(std::move(r));
      out << m << " window " << size << ": accuracy " << report.overall_accuracy << '\n';
    }
  }
  write_atomic(output, csv_text(rows));
  Inputs inputs;
  inputs.add(input);
  json cfg{{"sizes", sizes}, {"runs", configs}, {"filter_order", f.filter_order}, {"sensor", f.sensor}};
  write_manifest(output, "sweep", seed, cfg, inputs, started);
  if (svg) write_atomic(*svg, sweep_svg(rows));
  return kOk;
}

int cmd_report(const std::vector<std::filesystem::path>& inputs, const std::optional<std::filesystem::path>& output,
               std::ostream& out, std::ostream& err) {
  std::vector<ResultsFile> files;
  for (const auto& p : inputs) {
    std::ifstream in(p);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + p.string() + "'");
    try {
      files.push_back(ResultsFile{p.filename().string(), parse_results_csv(in)});
    } catch (const Error& e) {
      err << "in " << p.string() << ":\n";
      throw;
    }
  }
  if (files.size() == 1) err << "warning: only one results file, significance tests skipped\n";
  const std::string md = combined_report(files);
  if (output) {
    write_atomic(*output, md);
  } else {
    out << md;
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Smartwatch activity recognition toolkit", "har"};
  app.set_version_flag("--version", HAR_VERSION);
  app.require_subcommand(1, 1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic recordings dataset");
  std::filesystem::path synth_dir;
  SynthParams sp;
  std::optional<std::uint64_t> synth_seed;
  std::vector<std::string> synth_sensors{"accel", "gyro", "mag"};
  synth->add_option("-o,--out", synth_dir, "Output directory")->required();
  synth->add_option("--subjects", sp.n_subjects, "Number of subjects")->check(CLI::Range(1, 100000));
  synth->add_option("--minutes", sp.minutes_per_activity, "Minutes per activity")->check(CLI::PositiveNumber);
  synth->add_option("--rate", sp.sample_rate_hz, "Sample rate in Hz")->check(CLI::Range(1e-9, 1000.0));
  synth->add_option("--seed", synth_seed, "Seed (default: HAR_SEED or 7)");
  synth->add_option("--variability", sp.subject_variability, "Between-subject variability scale")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--noise", sp.noise_scale, "Within-recording variability scale")->check(CLI::NonNegativeNumber);
  synth->add_option("--sensors", synth_sensors, "Sensors to emit")
      ->delimiter(',')
      ->check(CLI::IsMember({"accel", "gyro", "mag"}));

  // extract
  auto* extract = app.add_subcommand("extract", "Filter, segment and extract features from recordings");
  std::filesystem::path extract_in;
  std::filesystem::path extract_out;
  EvalFlags extract_flags;
  extract->add_option("-i,--in", extract_in, "Recordings CSV")->required();
  extract->add_option("-o,--out", extract_out, "Features CSV")->required();
  extract->add_option("--bank", extract_flags.bank, "Feature bank: a (43) or b (70)")->check(CLI::IsMember({"a", "b"}));
  extract->add_option("--window", extract_flags.window, "Samples per window")->check(CLI::Range(kMinWindowSamples, std::size_t{100000000}));
  extract->add_option("--filter-order", extract_flags.filter_order, "Moving-average order, 0 disables")
      ->check(CLI::Range(0, 1000));
  extract->add_option("--sensor", extract_flags.sensor, "accel, gyro, mag or all")
      ->check(CLI::IsMember({"accel", "gyro", "mag", "all"}));
  extract->add_option("--rate", extract_flags.rate, "Sample rate of recordings in Hz")->check(CLI::PositiveNumber);
  extract->add_option("--threads", extract_flags.threads, "Worker threads")->check(CLI::Range(1, 1024));

  // eval
  auto* eval = app.add_subcommand("eval", "Cross-validate one classifier");
  std::filesystem::path eval_in;
  std::filesystem::path eval_out;
  std::optional<std::filesystem::path> eval_md;
  std::string eval_model = "dtree";
  EvalFlags eval_flags;
  eval->add_option("-i,--in", eval_in, "Recordings or features CSV")->required();
  eval->add_option("-o,--out", eval_out, "Results CSV")->required();
  eval->add_option("--markdown", eval_md, "Write the markdown table here instead of stdout");
  eval->add_option("--model", eval_model, "dtree, nb, knn, svm or bag")
      ->check(CLI::IsMember({"dtree", "nb", "knn", "svm", "bag"}));
  eval->add_option("--window", eval_flags.window, "Samples per window")->check(CLI::Range(kMinWindowSamples, std::size_t{100000000}));
  eval_flags.add(eval);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Evaluate across window sizes");
  std::filesystem::path sweep_in;
  std::filesystem::path sweep_out;
  std::optional<std::filesystem::path> sweep_svg_path;
  std::vector<std::string> sweep_models{"dtree", "knn"};
  std::string sweep_sizes = "25:300:25";
  EvalFlags sweep_flags;
  sweep->add_option("-i,--in", sweep_in, "Recordings CSV")->required();
  sweep->add_option("-o,--out", sweep_out, "Results CSV")->required();
  sweep->add_option("--svg", sweep_svg_path, "Chart output");
  sweep->add_option("--models", sweep_models, "Classifiers to sweep")
      ->delimiter(',')
      ->check(CLI::IsMember({"dtree", "nb", "knn", "svm", "bag"}));
  sweep->add_option("--sizes", sweep_sizes, "start:stop:step or a comma list");
  sweep_flags.add(sweep);

  // report
  auto* report = app.add_subcommand("report", "Combine results files into markdown with t-tests");
  std::vector<std::filesystem::path> report_in;
  std::optional<std::filesystem::path> report_out;
  report->add_option("inputs", report_in, "Results CSV files")->required();
  report->add_option("-o,--out", report_out, "Markdown output (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kUsage;
  }

  try {
    if (*synth) return cmd_synth(synth_dir, sp, synth_seed, synth_sensors, out);
    if (*extract) return cmd_extract(extract_in, extract_out, extract_flags, out);
    if (*eval) return cmd_eval(eval_in, eval_out, eval_md, eval_model, eval_flags, out);
    if (*sweep) return cmd_sweep(sweep_in, sweep_out, sweep_svg_path, sweep_models, sweep_sizes, sweep_flags, out);
    if (*report) return cmd_report(report_in, report_out, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}

}  // namespace har::cli
