#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "har/error.hpp"
#include "har/eval.hpp"

namespace har::cli {

/// Exit codes shared by every subcommand.
enum Exit : int { kOk = 0, kUsage = 2, kIo = 3, kSchema = 4, kProtocol = 5 };

/// Runs one command line (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int exit_code_for(ErrorCode code) noexcept;

// Output plumbing.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string sha256_file(const std::filesystem::path& path);

/// Accuracy-vs-window chart, one polyline per classifier and activity.
std::string sweep_svg(std::span<const ResultRow> rows);

struct ResultsFile {
  std::string name;
  std::vector<ResultRow> rows;
};

/// Markdown tables for one or more results files, with paired t-tests
/// between treatments (or between the two files) when more than one file is given.
std::string combined_report(std::span<const ResultsFile> files);

}  // namespace har::cli
