#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ace/autorate/autorate.hpp"
#include "ace/core/types.hpp"
#include "ace/evolve/evolve.hpp"
#include "ace/gateway/http.hpp"
#include "ace/rollout/rollout.hpp"
#include "ace/sim/worlds.hpp"

namespace ace::cli {

struct BackendConfig {
    std::string kind = "mock"; // "mock" | "http"
    // mock
    std::string world = "word_count"; // "word_count" | "math"
    std::uint64_t seed = 1;
    sim::WordWorldParams word_params;
    sim::MathWorldParams math_params;
    // http
    gateway::HttpBackendConfig http;
};

struct GatewayConfig {
    int fan_out = gateway::Gateway::kDefaultFanOut;
    long budget = 0; // 0 = unlimited
    int max_retries = gateway::Gateway::kDefaultRetries;
    int base_delay_ms = 200;
    std::string ace_model; // model driving extraction/proposal/apply/evolve
    std::map<std::string, BackendConfig> backends;
};

struct SplitConfig {
    std::array<double, 3> ratios = {0.6, 0.2, 0.2};
    long seed = 7;
};

// Whole-run configuration: one human-readable JSON tree, sections per
// module. Every schedule hyperparameter is a named key.
struct Config {
    GatewayConfig gateway;
    std::map<std::string, core::TaskSpec> tasks;
    std::map<std::string, autorate::AutoraterConfig> autoraters;
    rollout::RolloutConfig rollout;
    mutate::MutateConfig mutate;
    evolve::EvolveConfig evolve;
    evolve::EvolutionSchedule schedule;
    SplitConfig split;
    std::string templates_dir;
    std::string prompts_file;
    std::string eval_prompts_file;

    const core::TaskSpec& task(const std::string& task_id) const;
    const autorate::AutoraterConfig& autorater(const std::string& autorater_id) const;
};

Config parse_config(const nlohmann::json& j);
nlohmann::json to_json(const Config& config);
Config load_config(const std::string& path);

// Fails when a task references an unknown autorater or target model, or a
// schedule/rollout invariant is broken; runs at load time.
void validate_config(const Config& config);

// Gateway + templates wired from the config. Mock backends are re-seeded per
// run seed (world seed combined with the run seed) so distinct seeds explore
// distinct worlds while replays stay byte-identical. Holds a reference to
// the config, which must outlive it.
class Runtime {
public:
    explicit Runtime(const Config& config);
    Runtime(const Runtime&) = delete;
    Runtime& operator=(const Runtime&) = delete;

    void configure_seed(long run_seed);
    autorate::Autorater make_autorater(const std::string& autorater_id);

    gateway::Gateway gw;
    mutate::TemplateSet templates = mutate::TemplateSet::defaults();

private:
    const Config& config_;
};

} // namespace ace::cli
