// Command-line shell: run-config files with presets and dotted-path
// overrides, the train/eval/ablate/export-csv commands, and the exit-code
// contract (0 ok, 1 config or user error, 2 numerical abort).
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "moerl/model.hpp"
#include "moerl/trainer.hpp"

namespace moerl::cli {

// Fully resolved run configuration. One root seed drives everything: the
// model init seed and every subsystem stream are derived from it by labeled
// hashing, so a run directory's echoed config reproduces the run bit-exactly.
struct RunConfig {
    model::ModelConfig model;
    trainer::TrainConfig train;
    uint64_t seed = 1;
    std::string out_dir;  // relative paths resolve under $MOERL_OUT_ROOT

    void finalize();  // derives model.seed / train.seed from `seed`
};

// The complete schema with defaults; also the authoritative echo format.
nlohmann::json resolved_json(const RunConfig& c);

// Merge user JSON over the defaults. Unknown keys are rejected by name
// ("unknown config key: train.max_stepz"); wrong value types are rejected
// naming the field. ConfigError on violation.
RunConfig config_from_json(const nlohmann::json& user);

// `source` is a preset name or a path to a JSON file (a missing path is a
// ConfigError whose message contains the path). Overrides are dotted-path
// key/value pairs applied last-writer-wins; values parse as JSON scalars and
// fall back to strings.
RunConfig load_run_config(const std::string& source,
                          const std::vector<std::pair<std::string, std::string>>& overrides);

std::vector<std::string> preset_names();

// Prefixes a relative path with $MOERL_OUT_ROOT when the variable is set.
std::string resolve_out_path(const std::string& path);

int cmd_train(const std::string& config_source,
              const std::vector<std::pair<std::string, std::string>>& overrides);
int cmd_eval(const std::string& checkpoint_path, const std::string& eval_set_path,
             int64_t max_new_tokens, const std::string& results_path);
int cmd_ablate(const std::string& suite, const std::string& config_source,
               const std::vector<std::pair<std::string, std::string>>& overrides);
int cmd_export_csv(const std::string& metrics_path, const std::string& csv_path);

// argv dispatcher used by the binary; never throws.
int run_main(int argc, char** argv);

}  // namespace moerl::cli
