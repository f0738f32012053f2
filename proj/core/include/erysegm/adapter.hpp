#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "erysegm/config.hpp"

namespace erysegm {

inline constexpr const char* kTaskSynthesize = "synthesize";
inline constexpr const char* kTaskParseFace = "parse_face";

/// Request manifest handed to the adapter as its only argument.
struct SynthRequest {
  std::filesystem::path input;
  std::vector<std::string> tasks{kTaskSynthesize, kTaskParseFace};
  std::string source_prompt;
  std::string edit_prompt;
  int steps = 50;
  double guidance_scale = 7.5;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
};

/// Response manifest; paths are absolute after parsing.
struct SynthResponse {
  std::filesystem::path reference;
  std::filesystem::path labelmask;
  std::filesystem::path class_map;
  std::map<std::string, std::string> model_ids;
  double elapsed_s = 0.0;
  std::filesystem::path manifest_path;
};

/// Name of the response manifest inside the request's out_dir.
inline constexpr const char* kResponseManifestName = "response.json";

std::string request_manifest_json(const SynthRequest& request);

/// Parses a request manifest; throws ManifestInvalid with the offending field.
SynthRequest parse_request_manifest(const std::string& text);

/// Validates a response manifest against the tasks that were requested.
/// Relative paths resolve against `base_dir`. Throws ManifestInvalid, or
/// OutputMissing when a referenced file does not exist.
SynthResponse parse_response_manifest(const std::string& text,
                                      const std::vector<std::string>& tasks,
                                      const std::filesystem::path& base_dir);

std::string response_manifest_json(const SynthResponse& response);

/// Splits a command line on whitespace, honouring single and double quotes.
std::vector<std::string> split_command(const std::string& command);

struct ProcessResult {
  int exit_code = 0;
  std::string stderr_text;
};

/// Spawns `argv` and waits. stdout and stderr go to `log_path`, whose
/// contents are returned as stderr_text. Throws AdapterNotFound when the
/// executable cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& log_path);

/// Writes the request manifest under `work_dir`, runs the adapter and
/// validates its response. Throws AdapterNotFound, AdapterNonzeroExit (with
/// captured stderr), ManifestInvalid or OutputMissing.
SynthResponse invoke_synthesizer(const AdapterConfig& adapter, const std::filesystem::path& input,
                                 const std::filesystem::path& work_dir,
                                 const std::vector<std::string>& tasks);

}  // namespace erysegm
