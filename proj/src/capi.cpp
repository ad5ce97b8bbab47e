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

#include "ladder_sqd/ladder_sqd.h"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "ladder_sqd/pipeline.hpp"

struct lsqd_config {
  lsqd::RunConfig cfg;
};

struct lsqd_report {
  std::string json;
  std::string manifest;
  double seconds = 0.0;
};

namespace {

thread_local std::string g_last_error;

lsqd_status set_error(lsqd_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Maps exceptions thrown by `f` to status codes.
template <typename F>
lsqd_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const lsqd::Error& e) {
    return set_error(static_cast<lsqd_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(LSQD_BUDGET_EXCEEDED, "out of memory");
  } catch (const std::exception& e) {
    return set_error(LSQD_INTERNAL, e.what());
  } catch (...) {
    return set_error(LSQD_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* lsqd_version(void) { return lsqd::version(); }

const char* lsqd_last_error(void) { return g_last_error.c_str(); }

const char* lsqd_status_name(lsqd_status status) {
  switch (status) {
    case LSQD_OK: return "ok";
    case LSQD_INVALID_ARGUMENT: return "invalid argument";
    case LSQD_PARSE: return "parse error";
    case LSQD_UNSUPPORTED: return "unsupported";
    case LSQD_NOT_FOUND: return "not found";
    case LSQD_NOT_CONVERGED: return "not converged";
    case LSQD_BUDGET_EXCEEDED: return "budget exceeded";
    case LSQD_IO: return "i/o error";
    case LSQD_INTERNAL: return "internal error";
    case LSQD_CHECK_FAILED: return "check failed";
  }
  return "unknown status";
}

lsqd_status lsqd_config_new(lsqd_config** out) {
  return guarded([&] {
    if (!out) return set_error(LSQD_INVALID_ARGUMENT, "null output pointer");
    *out = new lsqd_config{};
    return LSQD_OK;
  });
}

lsqd_status lsqd_config_load(const char* path, lsqd_config** out) {
  return guarded([&] {
    if (!path || !out) return set_error(LSQD_INVALID_ARGUMENT, "null argument");
    *out = new lsqd_config{lsqd::load_config(path)};
    return LSQD_OK;
  });
}

lsqd_status lsqd_config_parse(const char* text, lsqd_config** out) {
  return guarded([&] {
    if (!text || !out) return set_error(LSQD_INVALID_ARGUMENT, "null argument");
    std::istringstream in(text);
    *out = new lsqd_config{lsqd::parse_config(in)};
    return LSQD_OK;
  });
}

void lsqd_config_free(lsqd_config* cfg) { delete cfg; }

lsqd_status lsqd_config_set(lsqd_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    if (!cfg || !key || !value) return set_error(LSQD_INVALID_ARGUMENT, "null argument");
    lsqd::set_config_value(cfg->cfg, key, value);
    return LSQD_OK;
  });
}

lsqd_status lsqd_config_validate(const lsqd_config* cfg) {
  return guarded([&] {
    if (!cfg) return set_error(LSQD_INVALID_ARGUMENT, "null config");
    cfg->cfg.validate();
    return LSQD_OK;
  });
}

lsqd_status lsqd_config_dump(const lsqd_config* cfg, char** out) {
  return guarded([&] {
    if (!cfg || !out) return set_error(LSQD_INVALID_ARGUMENT, "null argument");
    *out = copy_string(lsqd::dump_config(cfg->cfg));
    return LSQD_OK;
  });
}

lsqd_status lsqd_config_hash(const lsqd_config* cfg, uint64_t* out) {
  return guarded([&] {
    if (!cfg || !out) return set_error(LSQD_INVALID_ARGUMENT, "null argument");
    *out = lsqd::config_hash(cfg->cfg);
    return LSQD_OK;
  });
}

lsqd_status lsqd_run(const lsqd_config* cfg, const char* command, lsqd_report** out) {
  return guarded([&] {
    if (!cfg || !command || !out) return set_error(LSQD_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    auto* rep = new lsqd_report{};
    try {
      rep->json = lsqd::run_command(cfg->cfg, command, &ok);
      rep->manifest = lsqd::run_manifest(cfg->cfg, command);
    } catch (...) {
      delete rep;
      throw;
    }
    rep->seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    *out = rep;
    return ok ? LSQD_OK : set_error(LSQD_CHECK_FAILED, "oracle check failed");
  });
}

const char* lsqd_report_json(const lsqd_report* report) {
  return report ? report->json.c_str() : "";
}

const char* lsqd_report_manifest(const lsqd_report* report) {
  return report ? report->manifest.c_str() : "";
}

double lsqd_report_seconds(const lsqd_report* report) { return report ? report->seconds : 0.0; }

void lsqd_report_free(lsqd_report* report) { delete report; }

void lsqd_string_free(char* s) { std::free(s); }

}  // extern "C"
