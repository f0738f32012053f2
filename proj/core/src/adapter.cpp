#include "erysegm/adapter.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

#include <json.hpp>

#include "erysegm/error.hpp"
#include "erysegm/features.hpp"
#include "erysegm/io.hpp"

extern char** environ;

namespace erysegm {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ManifestInvalid, what); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string tail(const std::string& text, std::size_t max_bytes = 2000) {
  if (text.size() <= max_bytes) return text;
  return "..." + text.substr(text.size() - max_bytes);
}

bool wants(const std::vector<std::string>& tasks, const char* task) {
  return std::find(tasks.begin(), tasks.end(), task) != tasks.end();
}

std::filesystem::path resolve(const std::string& p, const std::filesystem::path& base) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal();
}

}  // namespace

std::string request_manifest_json(const SynthRequest& request) {
  json doc = {
      {"version", 1},
      {"input", request.input.string()},
      {"tasks", request.tasks},
      {"source_prompt", request.source_prompt},
      {"edit_prompt", request.edit_prompt},
      {"steps", request.steps},
      {"guidance_scale", request.guidance_scale},
      {"seed", request.seed},
      {"out_dir", request.out_dir.string()},
  };
  return doc.dump(2) + "\n";
}

SynthRequest parse_request_manifest(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    invalid(std::string("request manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) invalid("request manifest must be a JSON object");
  if (!doc.contains("version") || doc["version"] != 1) invalid("request manifest version must be 1");
  SynthRequest req;
  try {
    req.input = doc.at("input").get<std::string>();
    req.tasks = doc.at("tasks").get<std::vector<std::string>>();
    req.source_prompt = doc.at("source_prompt").get<std::string>();
    req.edit_prompt = doc.at("edit_prompt").get<std::string>();
    req.steps = doc.at("steps").get<int>();
    req.guidance_scale = doc.at("guidance_scale").get<double>();
    req.seed = doc.at("seed").get<std::uint64_t>();
    req.out_dir = doc.at("out_dir").get<std::string>();
  } catch (const json::exception& e) {
    invalid(std::string("request manifest field: ") + e.what());
  }
  if (req.tasks.empty()) invalid("request manifest lists no tasks");
  for (const auto& t : req.tasks) {
    if (t != kTaskSynthesize && t != kTaskParseFace) invalid("unknown task '" + t + "'");
  }
  if (req.steps < 1) invalid("steps must be >= 1, got " + std::to_string(req.steps));
  if (!(req.guidance_scale >= 0.0)) invalid("guidance_scale must be >= 0");
  return req;
}

SynthResponse parse_response_manifest(const std::string& text,
                                      const std::vector<std::string>& tasks,
                                      const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    invalid(std::string("response manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) invalid("response manifest must be a JSON object");
  if (!doc.contains("version") || doc["version"] != 1) {
    invalid("response manifest version must be 1");
  }

  SynthResponse resp;
  auto path_field = [&](const char* key, bool required, std::filesystem::path& out) {
    if (!doc.contains(key) || doc[key].is_null()) {
      if (required) invalid(std::string("response manifest lacks '") + key + "'");
      return;
    }
    if (!doc[key].is_string()) invalid(std::string("response field '") + key + "' must be a path");
    out = resolve(doc[key].get<std::string>(), base_dir);
    std::error_code ec;
    if (!std::filesystem::is_regular_file(out, ec)) {
      throw Error(ErrorKind::OutputMissing,
                  std::string("response field '") + key + "' points at missing file " +
                      out.string());
    }
  };
  path_field("reference", wants(tasks, kTaskSynthesize), resp.reference);
  path_field("labelmask", wants(tasks, kTaskParseFace), resp.labelmask);
  path_field("class_map", wants(tasks, kTaskParseFace), resp.class_map);

  if (doc.contains("model_ids")) {
    if (!doc["model_ids"].is_object()) invalid("response field 'model_ids' must be an object");
    for (const auto& [name, value] : doc["model_ids"].items()) {
      resp.model_ids[name] = value.is_string() ? value.get<std::string>() : value.dump();
    }
  } else {
    invalid("response manifest lacks 'model_ids'");
  }
  if (!doc.contains("elapsed_s") || !doc["elapsed_s"].is_number()) {
    invalid("response manifest lacks numeric 'elapsed_s'");
  }
  resp.elapsed_s = doc["elapsed_s"].get<double>();
  return resp;
}

std::string response_manifest_json(const SynthResponse& response) {
  json doc = {{"version", 1}, {"model_ids", response.model_ids}, {"elapsed_s", response.elapsed_s}};
  doc["reference"] = response.reference.empty() ? json(nullptr) : json(response.reference.string());
  doc["labelmask"] = response.labelmask.empty() ? json(nullptr) : json(response.labelmask.string());
  doc["class_map"] = response.class_map.empty() ? json(nullptr) : json(response.class_map.string());
  return doc.dump(2) + "\n";
}

std::vector<std::string> split_command(const std::string& command) {
  std::vector<std::string> out;
  std::string cur;
  bool in_token = false;
  char quote = 0;
  for (char c : command) {
    if (quote != 0) {
      if (c == quote) {
        quote = 0;
      } else {
        cur.push_back(c);
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      in_token = true;
    } else if (c == ' ' || c == '\t' || c == '\n') {
      if (in_token) {
        out.push_back(cur);
        cur.clear();
        in_token = false;
      }
    } else {
      cur.push_back(c);
      in_token = true;
    }
  }
  if (quote != 0) throw Error(ErrorKind::Config, "unterminated quote in command: " + command);
  if (in_token) out.push_back(cur);
  return out;
}

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& log_path) {
  if (argv.empty()) throw Error(ErrorKind::AdapterNotFound, "empty adapter command");
  std::vector<char*> args;
  args.reserve(argv.size() + 1);
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log_path.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);

  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw Error(ErrorKind::AdapterNotFound,
                "cannot start '" + argv[0] + "': " + std::strerror(rc));
  }
  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw Error(ErrorKind::AdapterNonzeroExit, "waitpid failed");
  }
  ProcessResult result;
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  } else {
    result.exit_code = -1;
  }
  result.stderr_text = read_file(log_path);
  // A shell reports an unresolvable program as 127.
  if (result.exit_code == 127 && result.stderr_text.find("not found") != std::string::npos) {
    throw Error(ErrorKind::AdapterNotFound, "'" + argv[0] + "': " + tail(result.stderr_text));
  }
  return result;
}

SynthResponse invoke_synthesizer(const AdapterConfig& adapter, const std::filesystem::path& input,
                                 const std::filesystem::path& work_dir,
                                 const std::vector<std::string>& tasks) {
  const std::string command = resolve_adapter_command(adapter);
  if (command.empty()) {
    throw Error(ErrorKind::AdapterNotFound,
                std::string("no adapter command configured (set --adapter-command or ") +
                    kAdapterEnvVar + ")");
  }
  std::error_code ec;
  std::filesystem::create_directories(work_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + work_dir.string() + ": " + ec.message());
  const std::filesystem::path dir = std::filesystem::absolute(work_dir).lexically_normal();

  SynthRequest request;
  request.input = std::filesystem::absolute(input).lexically_normal();
  request.tasks = tasks;
  request.source_prompt = adapter.source_prompt;
  request.edit_prompt = adapter.edit_prompt;
  request.steps = adapter.steps;
  request.guidance_scale = adapter.guidance;
  request.seed = adapter.seed;
  request.out_dir = dir;

  const std::filesystem::path request_path = dir / "request.json";
  const std::filesystem::path response_path = dir / kResponseManifestName;
  std::filesystem::remove(response_path, ec);
  {
    std::ofstream out(request_path, std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + request_path.string());
    out << request_manifest_json(request);
  }

  std::vector<std::string> argv = split_command(command);
  argv.push_back(request_path.string());
  const ProcessResult proc = run_process(argv, dir / "adapter.log");
  if (proc.exit_code != 0) {
    throw Error(ErrorKind::AdapterNonzeroExit,
                "adapter exited with status " + std::to_string(proc.exit_code) + "; stderr:\n" +
                    tail(proc.stderr_text));
  }
  if (!std::filesystem::is_regular_file(response_path, ec)) {
    throw Error(ErrorKind::OutputMissing, "adapter wrote no " + response_path.string());
  }
  SynthResponse response = parse_response_manifest(read_file(response_path), tasks, dir);
  response.manifest_path = response_path;

  if (!response.reference.empty()) {
    try {
      const RasterImage ref = load_image(response.reference);
      if (ref.width() < 2 * kKeypointMargin + 1 || ref.height() < 2 * kKeypointMargin + 1) {
        invalid("reference " + response.reference.string() + " is too small to register");
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ManifestInvalid) throw;
      invalid("reference is not a usable image: " + std::string(e.what()));
    }
  }
  return response;
}

}  // namespace erysegm
