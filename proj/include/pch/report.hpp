#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pch {

struct RunOptions {
  std::optional<int> bounds_m;
  int denom_cap = 8;
  int jobs = 1;
  bool json = false;
  bool unary_weights = false;
  std::string engine = "auto";
  std::string out_path;  // empty: derived from the input path
};

// Machine-readable command outcome; stable for identical inputs and flags
// (the timing field aside).
struct RunReport {
  std::string command;
  std::string status;
  int exit_code = 0;
  std::vector<std::pair<std::string, std::string>> fields;
  std::string bounds;
  double elapsed_seconds = 0.0;
  bool json = false;

  std::string render() const;  // text or JSON per the json flag
};

RunReport run_eval(const std::string& model_path, const std::string& formula_path,
                   const RunOptions& options);
RunReport run_sat(const std::string& formula_path, const RunOptions& options);
RunReport run_valid(const std::string& formula_path, const RunOptions& options);
RunReport run_reduce(const std::string& problem, const std::string& input_path,
                     const RunOptions& options);
RunReport run_transform(const std::string& op, const std::string& input_path,
                        const RunOptions& options);
RunReport run_classify(const std::string& formula_path, const RunOptions& options);

}  // namespace pch
