#include "clearbench/simgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "clearbench/rng.hpp"

namespace clearbench {

namespace {

void check_rate(double value, const char* name, bool exclusive_top = false) {
  const bool ok = value >= 0.0 && (exclusive_top ? value < 1.0 : value <= 1.0);
  if (!ok) {
    throw Error::domain(std::string("profile field ") + name +
                        " must lie in [0,1" + (exclusive_top ? ")" : "]"));
  }
}

void check_nonneg(double value, const char* name) {
  if (!(value >= 0.0)) {
    throw Error::domain(std::string("profile field ") + name +
                        " must be non-negative");
  }
}

}  // namespace

void validate_profile(const AgentProfileSpec& p) {
  if (p.agent_id.empty()) {
    throw Error::domain("profile has an empty agent_id");
  }
  check_rate(p.success_rate, "success_rate");
  check_rate(p.success_autocorrelation, "success_autocorrelation", true);
  check_rate(p.violation_rate, "violation_rate");
  check_rate(p.attack_success_rate, "attack_success_rate");
  check_nonneg(p.input_tokens_mean, "input_tokens_mean");
  check_nonneg(p.input_tokens_spread, "input_tokens_spread");
  check_nonneg(p.output_tokens_mean, "output_tokens_mean");
  check_nonneg(p.output_tokens_spread, "output_tokens_spread");
  check_nonneg(p.latency_plan_mean_s, "latency_plan_mean_s");
  check_nonneg(p.latency_exec_mean_s, "latency_exec_mean_s");
  check_nonneg(p.latency_reflect_mean_s, "latency_reflect_mean_s");
}

std::vector<AgentProfileSpec> load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error::io("cannot open " + path.string());
  }
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("profiles")) {
    throw Error::domain("profiles file " + path.string() +
                        " must be JSON with a \"profiles\" list");
  }

  std::vector<AgentProfileSpec> profiles;
  for (const nlohmann::json& obj : doc["profiles"]) {
    AgentProfileSpec p;
    p.agent_id = obj.at("agent_id").get<std::string>();
    p.success_rate = obj.at("success_rate").get<double>();
    auto opt = [&](const char* key, double fallback) {
      return obj.contains(key) ? obj.at(key).get<double>() : fallback;
    };
    p.success_autocorrelation = opt("success_autocorrelation", 0.0);
    p.input_tokens_mean = opt("input_tokens_mean", p.input_tokens_mean);
    p.input_tokens_spread = opt("input_tokens_spread", p.input_tokens_spread);
    p.output_tokens_mean = opt("output_tokens_mean", p.output_tokens_mean);
    p.output_tokens_spread = opt("output_tokens_spread", p.output_tokens_spread);
    p.latency_plan_mean_s = opt("latency_plan_mean_s", p.latency_plan_mean_s);
    p.latency_exec_mean_s = opt("latency_exec_mean_s", p.latency_exec_mean_s);
    p.latency_reflect_mean_s = opt("latency_reflect_mean_s", p.latency_reflect_mean_s);
    p.violation_rate = opt("violation_rate", 0.0);
    p.attack_success_rate = opt("attack_success_rate", 0.0);
    validate_profile(p);
    profiles.push_back(std::move(p));
  }
  if (profiles.empty()) {
    throw Error::domain("profiles file " + path.string() + " lists no profiles");
  }
  return profiles;
}

namespace {

std::int64_t sample_tokens(Rng& rng, double mean, double spread) {
  const double value = mean + spread * rng.next_gaussian();
  return std::max<std::int64_t>(0, std::llround(value));
}

double sample_phase(Rng& rng, double mean) {
  // 10% relative jitter, clamped at zero
  return std::max(0.0, mean * (1.0 + 0.1 * rng.next_gaussian()));
}

constexpr std::int64_t kActionsPerTask = 10;

}  // namespace

std::vector<RunRecord> generate(const std::vector<AgentProfileSpec>& profiles,
                                const std::vector<TaskSpec>& suite,
                                int trials_per_task, std::uint64_t seed) {
  for (const AgentProfileSpec& p : profiles) validate_profile(p);
  if (trials_per_task < 1) {
    throw Error::domain("trials_per_task must be at least 1");
  }
  if (suite.empty()) {
    throw Error::domain("generate: empty suite");
  }

  std::vector<RunRecord> records;
  records.reserve(profiles.size() * suite.size() *
                  static_cast<std::size_t>(trials_per_task));
  for (std::size_t a = 0; a < profiles.size(); ++a) {
    const AgentProfileSpec& p = profiles[a];
    for (std::size_t t = 0; t < suite.size(); ++t) {
      Rng rng = Rng::substream(seed, a * suite.size() + t);
      bool previous_success = false;
      for (int trial = 0; trial < trials_per_task; ++trial) {
        RunRecord r;
        r.agent_id = p.agent_id;
        r.task_id = suite[t].task_id;
        r.trial_index = trial;
        r.run_id = p.agent_id + "/" + r.task_id + "/" + std::to_string(trial);

        if (trial == 0 || !rng.next_bernoulli(p.success_autocorrelation)) {
          r.success = rng.next_bernoulli(p.success_rate);
        } else {
          r.success = previous_success;
        }
        previous_success = r.success;

        r.input_tokens = sample_tokens(rng, p.input_tokens_mean, p.input_tokens_spread);
        r.output_tokens = sample_tokens(rng, p.output_tokens_mean, p.output_tokens_spread);
        r.latency_plan_s = sample_phase(rng, p.latency_plan_mean_s);
        r.latency_exec_s = sample_phase(rng, p.latency_exec_mean_s);
        r.latency_reflect_s = sample_phase(rng, p.latency_reflect_mean_s);
        r.latency_total_s = r.latency_plan_s + r.latency_exec_s + r.latency_reflect_s;

        r.policy_critical_actions = kActionsPerTask;
        r.policy_violations = 0;
        for (std::int64_t i = 0; i < kActionsPerTask; ++i) {
          if (rng.next_bernoulli(p.violation_rate)) ++r.policy_violations;
        }
        if (trial == 0) {
          SecurityProbe probe;
          probe.attack_case_id = "probe/" + r.task_id;
          probe.attack_succeeded = rng.next_bernoulli(p.attack_success_rate);
          r.security_probe = probe;
        }
        records.push_back(std::move(r));
      }
    }
  }
  return records;
}

std::vector<DomainProfile> default_domain_profiles() {
  std::vector<DomainProfile> profiles;
  auto add = [&](Domain d, std::map<std::string, double> sla_map) {
    DomainProfile p;
    p.domain = d;
    p.sla_map = std::move(sla_map);
    profiles.push_back(std::move(p));
  };
  add(Domain::CustomerSupport, {{"*", 3.0}});
  add(Domain::DataAnalysis, {{"query", 15.0}, {"report", 45.0}, {"*", 15.0}});
  add(Domain::ProcessAutomation, {{"*", 10.0}});
  add(Domain::SoftwareDevelopment, {{"analysis", 30.0}, {"generation", 60.0}, {"*", 30.0}});
  add(Domain::Compliance, {{"*", 20.0}});
  add(Domain::MultiStakeholder, {{"*", 15.0}});
  return profiles;
}

namespace {

std::string padded_task_id(std::size_t index) {
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "task-%04zu", index);
  return buffer;
}

std::vector<TaskSpec> fixture_suite(std::size_t task_count,
                                    const std::vector<Domain>& domain_of_task,
                                    const std::vector<DomainProfile>& profiles) {
  std::map<Domain, const DomainProfile*> by_domain;
  for (const DomainProfile& p : profiles) by_domain[p.domain] = &p;

  std::vector<TaskSpec> suite;
  suite.reserve(task_count);
  for (std::size_t t = 0; t < task_count; ++t) {
    TaskSpec task;
    task.task_id = padded_task_id(t);
    task.domain = domain_of_task[t];
    task.subtype = "*";
    task.step_count = 5 + static_cast<int>(t % 11);
    task.sla_seconds = by_domain.at(task.domain)->resolve_sla(task.subtype);
    suite.push_back(std::move(task));
  }
  return suite;
}

PricingTable flat_pricing(const std::vector<std::string>& agent_ids) {
  PricingTable pricing;
  pricing.models["flat"] = {0.0, 0.0};
  for (const std::string& id : agent_ids) {
    pricing.agent_model_map[id] = {{"flat", 1.0}};
  }
  return pricing;
}

// Success-sequence shapes for 10-trial tasks. "run8" has an 8-success
// window but a failed first trial, which is how pass@8 can exceed
// first-trial efficacy.
const std::vector<std::uint8_t>& pattern_all_success() {
  static const std::vector<std::uint8_t> p = {1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  return p;
}
const std::vector<std::uint8_t>& pattern_first_only() {
  static const std::vector<std::uint8_t> p = {1, 1, 1, 1, 0, 1, 1, 1, 1, 0};
  return p;
}
const std::vector<std::uint8_t>& pattern_run8_late() {
  static const std::vector<std::uint8_t> p = {0, 1, 1, 1, 1, 1, 1, 1, 1, 0};
  return p;
}
const std::vector<std::uint8_t>& pattern_neither() {
  static const std::vector<std::uint8_t> p = {0, 1, 1, 1, 1, 0, 1, 1, 1, 1};
  return p;
}

struct ReferenceAgent {
  const char* agent_id;
  int efficacy_successes;   // of 1000 first trials
  int pass8_tasks;          // tasks with an 8-success window
  double cost_usd;
  double plan_s, exec_s, reflect_s;
  std::int64_t input_tokens, output_tokens;
  std::int64_t total_violations;  // of 10000 policy-critical actions
  int attack_successes;           // of 500 probes
};

// One row per agent; every derived table cell follows from these counts.
const std::vector<ReferenceAgent>& reference_agents() {
  static const std::vector<ReferenceAgent> agents = {
      {"ReAct-GPT4",   723, 583, 2.87, 2.1, 4.8, 1.5, 47200, 8300,  1100, 60},
      {"ReAct-GPT-o3", 687, 521, 0.31, 1.2, 2.4, 0.6, 52100, 9700,  1500, 75},
      {"Reflexion",    741, 612, 5.12, 3.4, 6.1, 3.2, 89400, 15200, 900,  55},
      {"Plan-Execute", 719, 645, 1.24, 1.8, 4.2, 0.8, 38600, 7100,  1200, 65},
      {"ToolFormer",   695, 557, 1.89, 1.5, 3.6, 0.8, 44300, 9800,  1800, 90},
      {"Domain-Tuned", 703, 728, 0.27, 0.9, 2.3, 0.6, 31200, 5400,  700,  40},
  };
  return agents;
}

constexpr std::size_t kReferenceTasks = 1000;
constexpr int kReferenceTrials = 10;
constexpr std::size_t kReferenceProbes = 500;

}  // namespace

Dataset reference_fixture() {
  Dataset dataset;

  std::vector<Domain> domain_of_task(kReferenceTasks);
  for (std::size_t t = 0; t < kReferenceTasks; ++t) {
    domain_of_task[t] = all_domains()[t % all_domains().size()];
  }
  dataset.profiles = default_domain_profiles();
  dataset.suite = fixture_suite(kReferenceTasks, domain_of_task, dataset.profiles);

  std::vector<std::string> agent_ids;
  for (const ReferenceAgent& agent : reference_agents()) {
    agent_ids.push_back(agent.agent_id);
  }
  dataset.pricing = flat_pricing(agent_ids);
  dataset.weights = builtin_weight_profiles();

  for (const ReferenceAgent& agent : reference_agents()) {
    // Task type layout: [0, a) all-success, [a, a+b) success then no
    // 8-window, [a+b, a+b+c) failed first trial but an 8-window, rest
    // neither. a+b = efficacy successes, a+c = pass@8 tasks.
    const int a = std::min(agent.efficacy_successes, agent.pass8_tasks);
    const int b = agent.efficacy_successes - a;
    const int c = agent.pass8_tasks - a;

    const std::int64_t base_violations =
        agent.total_violations / static_cast<std::int64_t>(kReferenceTasks);
    const std::int64_t extra_violation_tasks =
        agent.total_violations % static_cast<std::int64_t>(kReferenceTasks);

    for (std::size_t t = 0; t < kReferenceTasks; ++t) {
      const std::vector<std::uint8_t>* pattern = &pattern_neither();
      if (t < static_cast<std::size_t>(a)) {
        pattern = &pattern_all_success();
      } else if (t < static_cast<std::size_t>(a + b)) {
        pattern = &pattern_first_only();
      } else if (t < static_cast<std::size_t>(a + b + c)) {
        pattern = &pattern_run8_late();
      }

      for (int trial = 0; trial < kReferenceTrials; ++trial) {
        RunRecord r;
        r.agent_id = agent.agent_id;
        r.task_id = dataset.suite[t].task_id;
        r.trial_index = trial;
        r.run_id = r.agent_id + "/" + r.task_id + "/" + std::to_string(trial);
        r.success = (*pattern)[static_cast<std::size_t>(trial)] != 0;
        r.input_tokens = agent.input_tokens;
        r.output_tokens = agent.output_tokens;
        r.cost_usd = agent.cost_usd;
        r.latency_plan_s = agent.plan_s;
        r.latency_exec_s = agent.exec_s;
        r.latency_reflect_s = agent.reflect_s;
        r.latency_total_s = agent.plan_s + agent.exec_s + agent.reflect_s;
        if (trial == 0) {
          r.policy_critical_actions = kActionsPerTask;
          r.policy_violations =
              base_violations +
              (t < static_cast<std::size_t>(extra_violation_tasks) ? 1 : 0);
          if (t < kReferenceProbes) {
            SecurityProbe probe;
            probe.attack_case_id = "probe/" + r.task_id;
            probe.attack_succeeded = t < static_cast<std::size_t>(agent.attack_successes);
            r.security_probe = probe;
          }
        }
        dataset.records.push_back(std::move(r));
      }
    }
  }
  return dataset;
}

namespace {

struct DomainReferenceAgent {
  const char* agent_id;
  // per domain, in all_domains() order
  std::array<int, 6> successes;
  std::array<std::int64_t, 6> violations;
};

constexpr std::array<std::size_t, 6> kDomainTaskCounts = {1800, 1500, 1500,
                                                          1800, 1200, 1200};

const std::vector<DomainReferenceAgent>& domain_reference_agents() {
  static const std::vector<DomainReferenceAgent> agents = {
      {"ReAct-GPT4",
       {1410, 1035, 1065, 1320, 780, 736},
       {2340, 900, 1800, 1620, 2160, 2640}},
      {"Plan-Execute",
       {1350, 1080, 1095, 1260, 810, 768},
       {2700, 1050, 1650, 2340, 1920, 2280}},
      {"Domain-Tuned",
       {1470, 1065, 1080, 1291, 870, 826},
       {900, 600, 1200, 1080, 840, 1320}},
  };
  return agents;
}

}  // namespace

Dataset domain_reference_fixture() {
  Dataset dataset;

  std::size_t total_tasks = 0;
  for (std::size_t count : kDomainTaskCounts) total_tasks += count;

  std::vector<Domain> domain_of_task;
  domain_of_task.reserve(total_tasks);
  std::vector<std::size_t> domain_start(kDomainTaskCounts.size(), 0);
  for (std::size_t d = 0; d < kDomainTaskCounts.size(); ++d) {
    domain_start[d] = domain_of_task.size();
    for (std::size_t i = 0; i < kDomainTaskCounts[d]; ++i) {
      domain_of_task.push_back(all_domains()[d]);
    }
  }
  dataset.profiles = default_domain_profiles();
  dataset.suite = fixture_suite(total_tasks, domain_of_task, dataset.profiles);

  std::vector<std::string> agent_ids;
  for (const DomainReferenceAgent& agent : domain_reference_agents()) {
    agent_ids.push_back(agent.agent_id);
  }
  dataset.pricing = flat_pricing(agent_ids);
  dataset.weights = builtin_weight_profiles();

  for (const DomainReferenceAgent& agent : domain_reference_agents()) {
    for (std::size_t d = 0; d < kDomainTaskCounts.size(); ++d) {
      const std::size_t count = kDomainTaskCounts[d];
      const std::int64_t base = agent.violations[d] / static_cast<std::int64_t>(count);
      const std::int64_t extra = agent.violations[d] % static_cast<std::int64_t>(count);
      for (std::size_t i = 0; i < count; ++i) {
        const std::size_t t = domain_start[d] + i;
        RunRecord r;
        r.agent_id = agent.agent_id;
        r.task_id = dataset.suite[t].task_id;
        r.trial_index = 0;
        r.run_id = r.agent_id + "/" + r.task_id + "/0";
        r.success = i < static_cast<std::size_t>(agent.successes[d]);
        r.input_tokens = 1000;
        r.output_tokens = 200;
        r.cost_usd = 1.0;
        r.latency_plan_s = 1.0;
        r.latency_exec_s = 2.0;
        r.latency_reflect_s = 0.5;
        r.latency_total_s = 3.5;
        r.policy_critical_actions = kActionsPerTask;
        r.policy_violations = base + (i < static_cast<std::size_t>(extra) ? 1 : 0);
        dataset.records.push_back(std::move(r));
      }
    }
  }
  return dataset;
}

void write_fixture_inputs(const Dataset& dataset,
                          const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  write_runs(dataset.records, directory / "runs.jsonl");

  nlohmann::ordered_json suite;
  nlohmann::ordered_json profiles = nlohmann::ordered_json::object();
  for (const DomainProfile& p : dataset.profiles) {
    nlohmann::ordered_json sla_map = nlohmann::ordered_json::object();
    for (const auto& [subtype, seconds] : p.sla_map) sla_map[subtype] = seconds;
    profiles[to_string(p.domain)] = sla_map;
  }
  suite["domain_profiles"] = profiles;
  nlohmann::ordered_json tasks = nlohmann::ordered_json::array();
  for (const TaskSpec& task : dataset.suite) {
    tasks.push_back({{"task_id", task.task_id},
                     {"domain", to_string(task.domain)},
                     {"subtype", task.subtype},
                     {"step_count", task.step_count}});
  }
  suite["tasks"] = tasks;

  nlohmann::ordered_json pricing;
  nlohmann::ordered_json models = nlohmann::ordered_json::object();
  for (const auto& [model_id, price] : dataset.pricing.models) {
    models[model_id] = {{"input_usd_per_1k", price.input_usd_per_1k},
                        {"output_usd_per_1k", price.output_usd_per_1k}};
  }
  pricing["models"] = models;
  nlohmann::ordered_json agent_map = nlohmann::ordered_json::object();
  for (const auto& [agent_id, shares] : dataset.pricing.agent_model_map) {
    if (shares.size() == 1 && shares.front().token_share == 1.0) {
      agent_map[agent_id] = shares.front().model_id;
    } else {
      nlohmann::ordered_json list = nlohmann::ordered_json::array();
      for (const ModelShare& s : shares) {
        list.push_back({{"model_id", s.model_id}, {"token_share", s.token_share}});
      }
      agent_map[agent_id] = list;
    }
  }
  pricing["agent_model_map"] = agent_map;

  nlohmann::ordered_json weights;
  nlohmann::ordered_json profiles_obj = nlohmann::ordered_json::object();
  for (const auto& [name, w] : dataset.weights) {
    profiles_obj[name] = {{"cost", w.cost},
                          {"latency", w.latency},
                          {"efficacy", w.efficacy},
                          {"assurance", w.assurance},
                          {"reliability", w.reliability}};
  }
  weights["profiles"] = profiles_obj;

  auto dump = [&](const nlohmann::ordered_json& doc, const char* name) {
    std::ofstream out(directory / name, std::ios::binary);
    if (!out) {
      throw Error::io("cannot write " + (directory / name).string());
    }
    out << doc.dump(2) << '\n';
  };
  dump(suite, "suite.json");
  dump(pricing, "pricing.json");
  dump(weights, "weights.json");
}

}  // namespace clearbench
