#ifndef CLEARBENCH_TESTS_TESTUTIL_HPP
#define CLEARBENCH_TESTS_TESTUTIL_HPP

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "clearbench/model.hpp"

namespace testutil {

// Scratch directory removed at scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("clearbench_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// A record satisfying every invariant; tests tweak single fields.
inline clearbench::RunRecord valid_record(const std::string& agent,
                                          const std::string& task,
                                          int trial = 0, bool success = true) {
  clearbench::RunRecord r;
  r.run_id = agent + "/" + task + "/" + std::to_string(trial);
  r.agent_id = agent;
  r.task_id = task;
  r.trial_index = trial;
  r.success = success;
  r.input_tokens = 1000;
  r.output_tokens = 200;
  r.cost_usd = 0.5;
  r.latency_plan_s = 1.0;
  r.latency_exec_s = 2.0;
  r.latency_reflect_s = 0.5;
  r.latency_total_s = 3.5;
  r.policy_critical_actions = 10;
  r.policy_violations = 1;
  return r;
}

inline std::vector<clearbench::TaskSpec> small_suite(int count) {
  std::vector<clearbench::TaskSpec> suite;
  for (int i = 0; i < count; ++i) {
    clearbench::TaskSpec t;
    t.task_id = "t" + std::to_string(i);
    t.domain = clearbench::all_domains()[i % 6];
    t.subtype = "*";
    t.step_count = 5 + i % 11;
    t.sla_seconds = 10.0;
    suite.push_back(std::move(t));
  }
  return suite;
}

}  // namespace testutil

#endif  // CLEARBENCH_TESTS_TESTUTIL_HPP
