#include "clearbench/ingestion.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace clearbench {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error::io("cannot open " + path.string());
  }
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw Error::domain("malformed JSON in " + path.string());
  }
  return doc;
}

// ------------------------------------------------------------- run records

const std::set<std::string>& known_run_fields() {
  static const std::set<std::string> fields = {
      "run_id",          "agent_id",        "task_id",
      "trial_index",     "success",         "input_tokens",
      "output_tokens",   "cost_usd",        "latency_plan_s",
      "latency_exec_s",  "latency_reflect_s", "latency_total_s",
      "policy_critical_actions", "policy_violations", "security_probe",
  };
  return fields;
}

std::string require_string(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw Error::domain(std::string("missing field \"") + field + "\"");
  if (!it->is_string()) throw Error::domain(std::string("field \"") + field + "\" must be a string");
  return it->get<std::string>();
}

bool require_bool(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw Error::domain(std::string("missing field \"") + field + "\"");
  if (!it->is_boolean()) throw Error::domain(std::string("field \"") + field + "\" must be a boolean");
  return it->get<bool>();
}

std::int64_t require_count(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw Error::domain(std::string("missing field \"") + field + "\"");
  if (!it->is_number_integer() && !it->is_number_unsigned()) {
    throw Error::domain(std::string("field \"") + field + "\" must be an integer");
  }
  const auto value = it->get<std::int64_t>();
  if (value < 0) throw Error::domain(std::string("field \"") + field + "\" must be non-negative");
  return value;
}

double require_seconds(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw Error::domain(std::string("missing field \"") + field + "\"");
  if (!it->is_number()) throw Error::domain(std::string("field \"") + field + "\" must be a number");
  const auto value = it->get<double>();
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw Error::domain(std::string("field \"") + field + "\" must be finite and non-negative");
  }
  return value;
}

RunRecord record_from_json(const json& obj, std::vector<std::string>* warnings) {
  if (!obj.is_object()) throw Error::domain("record is not a JSON object");

  RunRecord r;
  r.run_id = require_string(obj, "run_id");
  r.agent_id = require_string(obj, "agent_id");
  r.task_id = require_string(obj, "task_id");
  r.trial_index = static_cast<int>(require_count(obj, "trial_index"));
  r.success = require_bool(obj, "success");
  r.input_tokens = require_count(obj, "input_tokens");
  r.output_tokens = require_count(obj, "output_tokens");
  if (obj.contains("cost_usd") && !obj["cost_usd"].is_null()) {
    r.cost_usd = require_seconds(obj, "cost_usd");
  }
  r.latency_plan_s = require_seconds(obj, "latency_plan_s");
  r.latency_exec_s = require_seconds(obj, "latency_exec_s");
  r.latency_reflect_s = require_seconds(obj, "latency_reflect_s");
  r.latency_total_s = require_seconds(obj, "latency_total_s");
  r.policy_critical_actions = require_count(obj, "policy_critical_actions");
  r.policy_violations = require_count(obj, "policy_violations");
  if (obj.contains("security_probe") && !obj["security_probe"].is_null()) {
    const json& probe = obj["security_probe"];
    if (!probe.is_object()) throw Error::domain("field \"security_probe\" must be an object");
    SecurityProbe p;
    p.attack_case_id = require_string(probe, "attack_case_id");
    p.attack_succeeded = require_bool(probe, "attack_succeeded");
    r.security_probe = p;
  }

  if (warnings) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!known_run_fields().contains(it.key())) {
        warnings->push_back("record " + r.run_id + ": unknown field \"" + it.key() +
                            "\" ignored");
      }
    }
  }
  return r;
}

}  // namespace

RunsLoadResult load_runs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error::io("cannot open " + path.string());
  }

  RunsLoadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) {
      result.errors.push_back({line_no, "not valid JSON"});
      continue;
    }
    try {
      result.records.push_back(record_from_json(obj, &result.warnings));
    } catch (const Error& e) {
      result.errors.push_back({line_no, e.what()});
    }
  }
  return result;
}

std::string serialize_run(const RunRecord& r) {
  ordered_json obj;
  obj["run_id"] = r.run_id;
  obj["agent_id"] = r.agent_id;
  obj["task_id"] = r.task_id;
  obj["trial_index"] = r.trial_index;
  obj["success"] = r.success;
  obj["input_tokens"] = r.input_tokens;
  obj["output_tokens"] = r.output_tokens;
  if (r.cost_usd) obj["cost_usd"] = *r.cost_usd;
  obj["latency_plan_s"] = r.latency_plan_s;
  obj["latency_exec_s"] = r.latency_exec_s;
  obj["latency_reflect_s"] = r.latency_reflect_s;
  obj["latency_total_s"] = r.latency_total_s;
  obj["policy_critical_actions"] = r.policy_critical_actions;
  obj["policy_violations"] = r.policy_violations;
  if (r.security_probe) {
    obj["security_probe"] = {
        {"attack_case_id", r.security_probe->attack_case_id},
        {"attack_succeeded", r.security_probe->attack_succeeded},
    };
  }
  return obj.dump();
}

RunRecord parse_run(const std::string& line) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded()) {
    throw Error::domain("not valid JSON");
  }
  return record_from_json(obj, nullptr);
}

void write_runs(const std::vector<RunRecord>& records,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) {
    throw Error::io("cannot write " + path.string());
  }
  for (const RunRecord& r : records) {
    out << serialize_run(r) << '\n';
  }
  if (!out) {
    throw Error::io("failed while writing " + path.string());
  }
}

// ----------------------------------------------------------------- suite

SuiteLoadResult load_suite(const std::filesystem::path& path) {
  const json doc = parse_json_file(path);
  if (!doc.is_object() || !doc.contains("domain_profiles") || !doc.contains("tasks")) {
    throw Error::domain("suite manifest " + path.string() +
                        " must contain \"domain_profiles\" and \"tasks\"");
  }

  SuiteLoadResult result;
  std::map<Domain, DomainProfile> profiles;
  for (auto it = doc["domain_profiles"].begin(); it != doc["domain_profiles"].end(); ++it) {
    DomainProfile profile;
    profile.domain = domain_from_string(it.key());
    if (!it.value().is_object()) {
      throw Error::domain("domain profile for " + it.key() + " must map subtype to seconds");
    }
    for (auto entry = it.value().begin(); entry != it.value().end(); ++entry) {
      const double seconds = entry.value().get<double>();
      if (!(seconds > 0.0)) {
        throw Error::domain("SLA for " + it.key() + "/" + entry.key() +
                            " must be positive");
      }
      profile.sla_map[entry.key()] = seconds;
    }
    profiles[profile.domain] = profile;
  }
  for (Domain d : all_domains()) {
    if (!profiles.contains(d)) {
      throw Error::domain("suite manifest must declare an SLA map for domain " +
                          to_string(d));
    }
  }

  std::set<std::string> seen_ids;
  for (const json& entry : doc["tasks"]) {
    TaskSpec task;
    task.task_id = require_string(entry, "task_id");
    const std::string domain_name = require_string(entry, "domain");
    try {
      task.domain = domain_from_string(domain_name);
    } catch (const Error&) {
      throw Error::domain("task \"" + task.task_id + "\": unknown domain \"" +
                          domain_name + "\"");
    }
    task.subtype = entry.contains("subtype") ? require_string(entry, "subtype") : "*";
    task.step_count = static_cast<int>(require_count(entry, "step_count"));
    if (task.step_count < kMinStepCount || task.step_count > kMaxStepCount) {
      throw Error::domain("task \"" + task.task_id + "\": step_count " +
                          std::to_string(task.step_count) + " outside [5, 15]");
    }
    task.sla_seconds = profiles[task.domain].resolve_sla(task.subtype);
    if (!seen_ids.insert(task.task_id).second) {
      throw Error::domain("duplicate task_id \"" + task.task_id + "\" in suite");
    }
    result.tasks.push_back(std::move(task));
  }

  for (auto& [domain, profile] : profiles) {
    result.profiles.push_back(std::move(profile));
  }
  return result;
}

// --------------------------------------------------------------- pricing

PricingTable load_pricing(const std::filesystem::path& path) {
  const json doc = parse_json_file(path);
  if (!doc.is_object() || !doc.contains("models") || !doc.contains("agent_model_map")) {
    throw Error::domain("pricing file " + path.string() +
                        " must contain \"models\" and \"agent_model_map\"");
  }

  PricingTable table;
  for (auto it = doc["models"].begin(); it != doc["models"].end(); ++it) {
    ModelPrice price;
    price.input_usd_per_1k = it.value().at("input_usd_per_1k").get<double>();
    price.output_usd_per_1k = it.value().at("output_usd_per_1k").get<double>();
    if (price.input_usd_per_1k < 0 || price.output_usd_per_1k < 0) {
      throw Error::domain("model \"" + it.key() + "\" has a negative price");
    }
    table.models[it.key()] = price;
  }

  for (auto it = doc["agent_model_map"].begin(); it != doc["agent_model_map"].end(); ++it) {
    std::vector<ModelShare> shares;
    if (it.value().is_string()) {
      shares.push_back({it.value().get<std::string>(), 1.0});
    } else if (it.value().is_array()) {
      for (const json& entry : it.value()) {
        ModelShare share;
        share.model_id = require_string(entry, "model_id");
        share.token_share = entry.at("token_share").get<double>();
        if (share.token_share < 0) {
          throw Error::domain("agent \"" + it.key() + "\": negative token_share");
        }
        shares.push_back(std::move(share));
      }
    } else {
      throw Error::domain("agent_model_map entry \"" + it.key() +
                          "\" must be a model_id or a list of shares");
    }
    double sum = 0.0;
    for (const ModelShare& s : shares) {
      if (!table.models.contains(s.model_id)) {
        throw Error::domain("agent \"" + it.key() + "\" references unknown model \"" +
                            s.model_id + "\"");
      }
      sum += s.token_share;
    }
    if (std::fabs(sum - 1.0) > kShareSumTolerance) {
      throw Error::domain("agent \"" + it.key() + "\": token shares sum to " +
                          std::to_string(sum) + ", expected 1.0");
    }
    table.agent_model_map[it.key()] = std::move(shares);
  }
  return table;
}

// --------------------------------------------------------------- weights

namespace {

WeightProfile weight_profile_from_json(const std::string& name, const json& obj) {
  WeightProfile profile;
  profile.cost = obj.at("cost").get<double>();
  profile.latency = obj.at("latency").get<double>();
  profile.efficacy = obj.at("efficacy").get<double>();
  profile.assurance = obj.at("assurance").get<double>();
  profile.reliability = obj.at("reliability").get<double>();
  if (!profile.valid()) {
    throw Error::domain("weight profile \"" + name +
                        "\" must have non-negative weights summing to 1");
  }
  return profile;
}

}  // namespace

std::map<std::string, WeightProfile> load_weights(const std::filesystem::path& path) {
  const json doc = parse_json_file(path);
  if (!doc.is_object() || !doc.contains("profiles")) {
    throw Error::domain("weights file " + path.string() + " must contain \"profiles\"");
  }
  std::map<std::string, WeightProfile> profiles;
  for (auto it = doc["profiles"].begin(); it != doc["profiles"].end(); ++it) {
    profiles[it.key()] = weight_profile_from_json(it.key(), it.value());
  }
  auto equal = profiles.find("equal");
  if (equal == profiles.end()) {
    throw Error::domain("weights file must include the \"equal\" profile");
  }
  const WeightProfile& e = equal->second;
  for (double w : {e.cost, e.latency, e.efficacy, e.assurance, e.reliability}) {
    if (std::fabs(w - 0.2) > 1e-9) {
      throw Error::domain("the \"equal\" profile must weight every dimension 0.2");
    }
  }
  return profiles;
}

const std::map<std::string, WeightProfile>& builtin_weight_profiles() {
  static const std::map<std::string, WeightProfile> profiles = {
      {"equal", {0.2, 0.2, 0.2, 0.2, 0.2}},
      {"financial_services", {0.1, 0.1, 0.1, 0.3, 0.4}},
      {"customer_facing", {0.1625, 0.35, 0.1625, 0.1625, 0.1625}},
  };
  return profiles;
}

// --------------------------------------------------------------- ratings

std::vector<ExpertRating> load_ratings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error::io("cannot open " + path.string());
  }

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw Error::domain("ratings file " + path.string() + " is empty");
  }
  ++line_no;
  if (line == "rater_id,agent_id,task_id,score\r") line.pop_back();
  if (line != "rater_id,agent_id,task_id,score") {
    throw Error::domain("ratings file must start with header "
                        "rater_id,agent_id,task_id,score");
  }

  std::vector<ExpertRating> ratings;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 4) {
      throw Error::domain("ratings row " + std::to_string(line_no) +
                          ": expected 4 comma-separated fields");
    }

    ExpertRating rating;
    rating.rater_id = fields[0];
    rating.agent_id = fields[1];
    rating.task_id = fields[2];
    try {
      std::size_t used = 0;
      rating.score = std::stoi(fields[3], &used);
      if (used != fields[3].size()) throw std::invalid_argument(fields[3]);
    } catch (const std::exception&) {
      throw Error::domain("ratings row " + std::to_string(line_no) +
                          ": score \"" + fields[3] + "\" is not an integer");
    }
    if (rating.score < 1 || rating.score > 5) {
      throw Error::domain("ratings row " + std::to_string(line_no) + ": score " +
                          std::to_string(rating.score) + " outside 1..5");
    }
    if (!seen.emplace(rating.rater_id, rating.agent_id, rating.task_id).second) {
      throw Error::domain("ratings row " + std::to_string(line_no) +
                          ": duplicate rating for (" + rating.rater_id + ", " +
                          rating.agent_id + ", " + rating.task_id + ")");
    }
    ratings.push_back(std::move(rating));
  }
  return ratings;
}

std::vector<std::string> load_task_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error::io("cannot open " + path.string());
  }
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) ids.push_back(line);
  }
  return ids;
}

}  // namespace clearbench
