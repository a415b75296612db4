// Copyright 2026 The levelset Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

// levelset-cli: run | compare | verify. Talks to the library only through
// the C interface.
//
// Exit codes: 0 success, 1 runtime error or failed verification, 2 config or
// usage error.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "levelset/levelset.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

int report(ls_status status) {
  if (status == LS_OK) return 0;
  std::fprintf(stderr, "levelset-cli: %s: %s\n", ls_status_name(status), ls_last_error());
  return status == LS_ERR_CONFIG ? kExitConfig : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active super-level-set estimation on grids"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ls_version()));

  std::string config;
  std::string out;
  std::string acquisitions;
  std::string level = "quick";
  bool inject_fault = false;

  auto* run = app.add_subcommand("run", "Run one experiment and write the per-step trace CSV");
  run->add_option("--config", config, "JSON experiment config")->required();
  run->add_option("--out", out, "Output CSV path")->required();

  auto* compare = app.add_subcommand("compare", "Run several acquisitions and write aggregated CSV");
  compare->add_option("--config", config, "JSON experiment config")->required();
  compare->add_option("--acq", acquisitions, "Comma-separated acquisitions, e.g. rmile,straddle,lse")
      ->required();
  compare->add_option("--out", out, "Output CSV path")->required();

  auto* verify = app.add_subcommand("verify", "Run the built-in verification suite");
  verify->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_flag("--inject-fault", inject_fault, "Run the law suite with a corrupted update");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  // Negative thread count: the library reads LEVELSET_THREADS.
  if (run->parsed()) return report(ls_run_file(config.c_str(), out.c_str(), -1));
  if (compare->parsed()) {
    return report(ls_compare_file(config.c_str(), acquisitions.c_str(), out.c_str(), -1));
  }

  int passed = 0;
  char* text = nullptr;
  const ls_status status = ls_verify(level == "full" ? 1 : 0, inject_fault ? 1 : 0, &passed, &text);
  if (status != LS_OK) return report(status);
  std::fputs(text, stdout);
  ls_string_free(text);
  return passed ? 0 : kExitRuntime;
}
