#include "ace/cli/config.hpp"

#include <fstream>

#include "ace/util/rng.hpp"

namespace ace::cli {

using nlohmann::json;

namespace {

template <typename T>
void opt(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

BackendConfig parse_backend(const json& j) {
    BackendConfig b;
    opt(j, "kind", b.kind);
    if (b.kind == "mock") {
        opt(j, "world", b.world);
        opt(j, "seed", b.seed);
        if (j.contains("params")) {
            const json& p = j.at("params");
            opt(p, "p_base", b.word_params.p_base);
            opt(p, "p_token", b.word_params.p_token);
            opt(p, "token", b.word_params.token);
            opt(p, "offer_token", b.word_params.offer_token);
            opt(p, "short_words", b.word_params.short_words);
            opt(p, "long_words", b.word_params.long_words);
            opt(p, "p_wrong_base", b.math_params.p_wrong_base);
            opt(p, "p_wrong_exp", b.math_params.p_wrong_exp);
            opt(p, "p_break", b.math_params.p_break);
        }
    } else if (b.kind == "http") {
        b.http.base_url = j.at("base_url").get<std::string>();
        opt(j, "path", b.http.path);
        opt(j, "api_key_env", b.http.api_key_env);
        opt(j, "auth_header", b.http.auth_header);
        opt(j, "auth_prefix", b.http.auth_prefix);
        opt(j, "model_field", b.http.model_field);
        opt(j, "messages_field", b.http.messages_field);
        opt(j, "role_field", b.http.role_field);
        opt(j, "content_field", b.http.content_field);
        opt(j, "temperature_field", b.http.temperature_field);
        opt(j, "max_tokens_field", b.http.max_tokens_field);
        opt(j, "response_text_pointer", b.http.response_text_pointer);
        opt(j, "model_name", b.http.model_name);
        opt(j, "timeout_seconds", b.http.timeout_seconds);
    } else {
        throw ConfigError("unknown backend kind: " + b.kind);
    }
    return b;
}

json backend_to_json(const BackendConfig& b) {
    json j{{"kind", b.kind}};
    if (b.kind == "mock") {
        j["world"] = b.world;
        j["seed"] = b.seed;
        j["params"] = {{"p_base", b.word_params.p_base},
                       {"p_token", b.word_params.p_token},
                       {"token", b.word_params.token},
                       {"offer_token", b.word_params.offer_token},
                       {"short_words", b.word_params.short_words},
                       {"long_words", b.word_params.long_words},
                       {"p_wrong_base", b.math_params.p_wrong_base},
                       {"p_wrong_exp", b.math_params.p_wrong_exp},
                       {"p_break", b.math_params.p_break}};
    } else {
        j["base_url"] = b.http.base_url;
        j["path"] = b.http.path;
        j["api_key_env"] = b.http.api_key_env;
        j["auth_header"] = b.http.auth_header;
        j["auth_prefix"] = b.http.auth_prefix;
        j["model_field"] = b.http.model_field;
        j["messages_field"] = b.http.messages_field;
        j["role_field"] = b.http.role_field;
        j["content_field"] = b.http.content_field;
        j["temperature_field"] = b.http.temperature_field;
        j["max_tokens_field"] = b.http.max_tokens_field;
        j["response_text_pointer"] = b.http.response_text_pointer;
        j["model_name"] = b.http.model_name;
        j["timeout_seconds"] = b.http.timeout_seconds;
    }
    return j;
}

autorate::AutoraterKind autorater_kind_from(const std::string& s) {
    if (s == "word_count") return autorate::AutoraterKind::WordCount;
    if (s == "math_csp") return autorate::AutoraterKind::MathCsp;
    if (s == "judge_worst_of_k") return autorate::AutoraterKind::JudgeWorstOfK;
    throw ConfigError("unknown autorater kind: " + s);
}

std::string autorater_kind_to(autorate::AutoraterKind k) {
    switch (k) {
        case autorate::AutoraterKind::WordCount: return "word_count";
        case autorate::AutoraterKind::MathCsp: return "math_csp";
        case autorate::AutoraterKind::JudgeWorstOfK: return "judge_worst_of_k";
    }
    return "word_count";
}

} // namespace

Config parse_config(const json& j) {
    Config c;
    if (j.contains("gateway")) {
        const json& g = j.at("gateway");
        opt(g, "fan_out", c.gateway.fan_out);
        opt(g, "budget", c.gateway.budget);
        if (g.contains("retry")) {
            opt(g.at("retry"), "max_retries", c.gateway.max_retries);
            opt(g.at("retry"), "base_delay_ms", c.gateway.base_delay_ms);
        }
        opt(g, "ace_model", c.gateway.ace_model);
        if (g.contains("backends"))
            for (const auto& [name, b] : g.at("backends").items())
                c.gateway.backends[name] = parse_backend(b);
    }
    if (j.contains("tasks")) {
        for (const auto& [id, t] : j.at("tasks").items()) {
            core::TaskSpec spec;
            spec.task_id = id;
            spec.description = t.at("description").get<std::string>();
            spec.autorater_id = t.at("autorater").get<std::string>();
            spec.target_model_id = t.at("target_model").get<std::string>();
            c.tasks[id] = spec;
        }
    }
    if (j.contains("autoraters")) {
        for (const auto& [id, a] : j.at("autoraters").items()) {
            autorate::AutoraterConfig ac;
            ac.id = id;
            ac.kind = autorater_kind_from(a.at("kind").get<std::string>());
            opt(a, "word_limit", ac.word_limit);
            opt(a, "k", ac.k);
            opt(a, "judge_question_template", ac.judge_question_template);
            opt(a, "judge_model", ac.judge_model_id);
            opt(a, "scores_file", ac.scores_file);
            c.autoraters[id] = ac;
        }
    }
    if (j.contains("rollout")) {
        const json& r = j.at("rollout");
        opt(r, "branching", c.rollout.branching);
        opt(r, "max_depth", c.rollout.max_depth);
        opt(r, "seeds", c.rollout.seeds);
        opt(r, "stop_on_success", c.rollout.stop_on_success);
        opt(r, "target_temperature", c.rollout.target_temperature);
        opt(r, "root_workers", c.rollout.root_workers);
    }
    if (j.contains("mutate")) {
        const json& m = j.at("mutate");
        opt(m, "temperature_explore", c.mutate.temperature_explore);
        opt(m, "temperature_apply", c.mutate.temperature_apply);
        opt(m, "implicit_cap", c.mutate.implicit_cap);
        opt(m, "max_output_tokens", c.mutate.max_output_tokens);
    }
    if (j.contains("evolve")) {
        const json& e = j.at("evolve");
        opt(e, "epochs", c.schedule.epochs);
        opt(e, "batch_size", c.schedule.batch_size);
        opt(e, "size_start", c.schedule.size_start);
        opt(e, "size_end", c.schedule.size_end);
        opt(e, "change_pct_start", c.schedule.change_pct_start);
        opt(e, "change_pct_end", c.schedule.change_pct_end);
        opt(e, "surrogate_temperature", c.evolve.surrogate_temperature);
        opt(e, "optimizer_temperature", c.evolve.optimizer_temperature);
        opt(e, "eval_workers", c.evolve.eval_workers);
    }
    if (j.contains("split")) {
        const json& s = j.at("split");
        if (s.contains("ratios")) {
            auto r = s.at("ratios").get<std::vector<double>>();
            if (r.size() != 3) throw ConfigError("split.ratios needs 3 entries");
            c.split.ratios = {r[0], r[1], r[2]};
        }
        opt(s, "seed", c.split.seed);
    }
    opt(j, "templates_dir", c.templates_dir);
    opt(j, "prompts_file", c.prompts_file);
    opt(j, "eval_prompts_file", c.eval_prompts_file);

    c.mutate.ace_model_id = c.gateway.ace_model;
    c.evolve.model_id = c.gateway.ace_model;
    validate_config(c);
    return c;
}

json to_json(const Config& c) {
    json backends = json::object();
    for (const auto& [name, b] : c.gateway.backends) backends[name] = backend_to_json(b);

    json tasks = json::object();
    for (const auto& [id, t] : c.tasks)
        tasks[id] = {{"description", t.description},
                     {"autorater", t.autorater_id},
                     {"target_model", t.target_model_id}};

    json autoraters = json::object();
    for (const auto& [id, a] : c.autoraters)
        autoraters[id] = {{"kind", autorater_kind_to(a.kind)},
                          {"word_limit", a.word_limit},
                          {"k", a.k},
                          {"judge_question_template", a.judge_question_template},
                          {"judge_model", a.judge_model_id},
                          {"scores_file", a.scores_file}};

    return json{
        {"gateway",
         {{"fan_out", c.gateway.fan_out},
          {"budget", c.gateway.budget},
          {"retry",
           {{"max_retries", c.gateway.max_retries}, {"base_delay_ms", c.gateway.base_delay_ms}}},
          {"ace_model", c.gateway.ace_model},
          {"backends", backends}}},
        {"tasks", tasks},
        {"autoraters", autoraters},
        {"rollout",
         {{"branching", c.rollout.branching},
          {"max_depth", c.rollout.max_depth},
          {"seeds", c.rollout.seeds},
          {"stop_on_success", c.rollout.stop_on_success},
          {"target_temperature", c.rollout.target_temperature},
          {"root_workers", c.rollout.root_workers}}},
        {"mutate",
         {{"temperature_explore", c.mutate.temperature_explore},
          {"temperature_apply", c.mutate.temperature_apply},
          {"implicit_cap", c.mutate.implicit_cap},
          {"max_output_tokens", c.mutate.max_output_tokens}}},
        {"evolve",
         {{"epochs", c.schedule.epochs},
          {"batch_size", c.schedule.batch_size},
          {"size_start", c.schedule.size_start},
          {"size_end", c.schedule.size_end},
          {"change_pct_start", c.schedule.change_pct_start},
          {"change_pct_end", c.schedule.change_pct_end},
          {"surrogate_temperature", c.evolve.surrogate_temperature},
          {"optimizer_temperature", c.evolve.optimizer_temperature},
          {"eval_workers", c.evolve.eval_workers}}},
        {"split", {{"ratios", c.split.ratios}, {"seed", c.split.seed}}},
        {"templates_dir", c.templates_dir},
        {"prompts_file", c.prompts_file},
        {"eval_prompts_file", c.eval_prompts_file}};
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

void validate_config(const Config& c) {
    for (const auto& [id, t] : c.tasks) {
        if (t.description.empty())
            throw ConfigError("task '" + id + "' has an empty description");
        if (!c.autoraters.count(t.autorater_id))
            throw ConfigError("task '" + id + "' references unknown autorater '" +
                              t.autorater_id + "'");
        if (!c.gateway.backends.count(t.target_model_id))
            throw ConfigError("task '" + id + "' references unknown target model '" +
                              t.target_model_id + "'");
    }
    if (!c.gateway.ace_model.empty() && !c.gateway.backends.count(c.gateway.ace_model))
        throw ConfigError("gateway.ace_model '" + c.gateway.ace_model +
                          "' is not a configured backend");
    for (const auto& [id, a] : c.autoraters) {
        if (a.kind == autorate::AutoraterKind::JudgeWorstOfK && !a.judge_model_id.empty() &&
            !c.gateway.backends.count(a.judge_model_id))
            throw ConfigError("autorater '" + id + "' references unknown judge model '" +
                              a.judge_model_id + "'");
        if (a.word_limit < 1) throw ConfigError("autorater '" + id + "' word_limit must be >= 1");
        if (a.k < 1) throw ConfigError("autorater '" + id + "' k must be >= 1");
    }
    try {
        c.schedule.validate();
        c.rollout.validate();
    } catch (const InvariantViolation& e) {
        throw ConfigError(e.what());
    }
}

const core::TaskSpec& Config::task(const std::string& task_id) const {
    auto it = tasks.find(task_id);
    if (it == tasks.end()) throw ConfigError("unknown task: " + task_id);
    return it->second;
}

const autorate::AutoraterConfig& Config::autorater(const std::string& autorater_id) const {
    auto it = autoraters.find(autorater_id);
    if (it == autoraters.end()) throw ConfigError("unknown autorater: " + autorater_id);
    return it->second;
}

Runtime::Runtime(const Config& config) : config_(config) {
    gw.with_fan_out(config.gateway.fan_out);
    gw.with_retry(config.gateway.max_retries,
                  std::chrono::milliseconds(config.gateway.base_delay_ms));
    if (config.gateway.budget > 0) gw.with_budget(config.gateway.budget);
    for (const auto& [name, b] : config.gateway.backends) {
        if (b.kind == "http")
            gw.register_backend(name, std::make_shared<gateway::HttpBackend>(b.http));
    }
    configure_seed(0);
    templates = config.templates_dir.empty() ? mutate::TemplateSet::defaults()
                                             : mutate::TemplateSet::load(config.templates_dir);
}

void Runtime::configure_seed(long run_seed) {
    for (const auto& [name, b] : config_.gateway.backends) {
        if (b.kind != "mock") continue;
        std::uint64_t seed =
            util::combine_seed(b.seed, static_cast<std::uint64_t>(run_seed));
        gateway::MockScript script = b.world == "math" ? sim::math_world(b.math_params)
                                                       : sim::word_world(b.word_params);
        gw.register_backend(name,
                            std::make_shared<gateway::MockBackend>(script, seed, name));
    }
}

autorate::Autorater Runtime::make_autorater(const std::string& autorater_id) {
    return autorate::Autorater(config_.autorater(autorater_id), &gw);
}

} // namespace ace::cli
