#pragma once

#include <memory>
#include <vector>

#include "flucid/evaluator.hpp"
#include "flucid/reconstruction.hpp"

namespace flucid {

// Verdicts produced by claim builtins during one evaluation, in call order.
struct ClaimLog {
  std::vector<recon::Verdict> verdicts;
};

// Registers invpsiacme(F, es): reconstructs explanations of the evidential
// statement `es` under the printer model and returns them as an array, one
// array [initial, event, state, event, state, ...] of atoms per explanation.
// When `es` has no `printer` sequence, [$, F] is used for it.
void install_printer_case(Evaluator& ev, recon::ExplainOptions opts, std::shared_ptr<ClaimLog> log = nullptr);

// The array form described above.
Value to_value(const recon::Run& run);

}  // namespace flucid
