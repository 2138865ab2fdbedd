#pragma once

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "flucid/case_builtins.hpp"
#include "flucid/parser.hpp"

namespace support {

inline std::string read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string case_path(const std::string& name) { return std::string(FLUCID_CASES_DIR) + "/" + name; }

inline const std::vector<std::string>& corpus() {
  static const std::vector<std::string> files = {
      "acmepsi.fl",      "combine.fl",  "expand_demo.fl", "invpsiacme.fl", "printer_alice.fl",
      "printer_evidence_only.fl", "product.fl", "raining.fl",     "storyboard.fl",
  };
  return files;
}

inline flucid::NodePtr load(const std::string& name) { return flucid::parse_source(read(case_path(name))); }

// An evaluator with the printer-case builtins, as the CLI sets it up.
inline std::unique_ptr<flucid::Evaluator> evaluator(std::size_t max_len = 12,
                                                    std::shared_ptr<flucid::ClaimLog> log = nullptr) {
  auto ev = std::make_unique<flucid::Evaluator>();
  flucid::install_printer_case(*ev, {max_len, false}, std::move(log));
  return ev;
}

inline const flucid::ast::Decl* find_decl(const flucid::AstNode& program, std::string_view name) {
  const auto* w = program.as<flucid::ast::Where>();
  if (!w) return nullptr;
  for (const auto& d : w->decls) {
    const auto& decl = std::get<flucid::ast::Decl>(d->node);
    if (decl.name == name) return &decl;
  }
  return nullptr;
}

struct CliResult {
  int code = -1;
  std::string out;
};

// Runs the CLI from the cases directory; stderr is kept only when asked.
inline CliResult cli(const std::string& args, bool with_stderr = false) {
  std::string cmd = "cd '" FLUCID_CASES_DIR "' && '" FLUCID_CLI "' " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
  CliResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace support
