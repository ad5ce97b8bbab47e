// Copyright 2026 The ladder-sqd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Talks to the library only through ladder_sqd.h.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ladder_sqd/ladder_sqd.h"

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitError = 2;

int report_error(lsqd_status s, const std::string& what) {
  std::fprintf(stderr, "lsqd: %s: %s (%s)\n", what.c_str(), lsqd_last_error(),
               lsqd_status_name(s));
  return kExitError;
}

struct ConfigGuard {
  lsqd_config* cfg = nullptr;
  ~ConfigGuard() { lsqd_config_free(cfg); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry-adapted sample-based diagonalization of the two-leg ladder Hubbard model"};
  app.set_version_flag("--version", std::string(lsqd_version()));

  std::string config_path;
  std::string output_dir;
  unsigned long long seed = 0;
  int threads = 0;
  bool dump = false;
  std::vector<std::string> overrides;

  app.add_option("-c,--config", config_path, "Run configuration file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides run.seed)");
  auto* threads_opt =
      app.add_option("--threads", threads, "OpenMP threads (overrides run.threads)")
          ->check(CLI::NonNegativeNumber);
  app.add_option("--set", overrides, "Override a config entry, section.key=value");
  auto* out_opt = app.add_option("-o,--output-dir", output_dir, "Artifact directory");
  app.add_flag("--dump-config", dump, "Print the effective configuration and exit");

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"tune-gap", "Tune t_perp so the finite-size gap is below the tolerance"},
      {"run-sqd", "Sample, recover and diagonalize once"},
      {"sweep", "Energy against subspace dimension for each basis and symmetrization"},
      {"correlations", "Pair correlation function of the RHF and SQD states"},
      {"oracle-check", "Run the invariant suite; exits nonzero on any failure"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
  app.require_subcommand(0, 1);

  CLI11_PARSE(app, argc, argv);

  ConfigGuard guard;
  lsqd_status s = config_path.empty() ? lsqd_config_new(&guard.cfg)
                                      : lsqd_config_load(config_path.c_str(), &guard.cfg);
  if (s != LSQD_OK) return report_error(s, "loading config");

  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "lsqd: --set expects section.key=value, got '%s'\n", o.c_str());
      return kExitError;
    }
    s = lsqd_config_set(guard.cfg, o.substr(0, eq).c_str(), o.substr(eq + 1).c_str());
    if (s != LSQD_OK) return report_error(s, "--set " + o);
  }
  if (*seed_opt) {
    s = lsqd_config_set(guard.cfg, "run.seed", std::to_string(seed).c_str());
    if (s != LSQD_OK) return report_error(s, "--seed");
  }
  if (*threads_opt) {
    s = lsqd_config_set(guard.cfg, "run.threads", std::to_string(threads).c_str());
    if (s != LSQD_OK) return report_error(s, "--threads");
  }
  if (*out_opt) {
    s = lsqd_config_set(guard.cfg, "output.dir", output_dir.c_str());
    if (s != LSQD_OK) return report_error(s, "--output-dir");
  }

  if (dump) {
    char* text = nullptr;
    s = lsqd_config_dump(guard.cfg, &text);
    if (s != LSQD_OK) return report_error(s, "dumping config");
    std::fputs(text, stdout);
    lsqd_string_free(text);
    return 0;
  }

  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    std::fputs(app.help().c_str(), stderr);
    return kExitError;
  }
  const std::string command = subs.front()->get_name();

  lsqd_report* report = nullptr;
  s = lsqd_run(guard.cfg, command.c_str(), &report);
  if (s != LSQD_OK && s != LSQD_CHECK_FAILED) return report_error(s, command);
  std::printf("%s\n", lsqd_report_json(report));
  std::fprintf(stderr, "lsqd: %s finished in %.2f s\n", command.c_str(),
               lsqd_report_seconds(report));
  lsqd_report_free(report);
  return s == LSQD_CHECK_FAILED ? kExitCheckFailed : 0;
}
