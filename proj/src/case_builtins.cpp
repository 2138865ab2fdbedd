#include "flucid/case_builtins.hpp"

namespace flucid {

Value to_value(const recon::Run& run) {
  std::vector<Value> items{Value::atom(recon::to_string(run.initial))};
  for (const auto& step : run.steps) {
    items.push_back(Value::atom(recon::to_string(step.event)));
    items.push_back(Value::atom(recon::to_string(step.state)));
  }
  return Value::array(std::move(items));
}

void install_printer_case(Evaluator& ev, recon::ExplainOptions opts, std::shared_ptr<ClaimLog> log) {
  ev.define_builtin("invpsiacme", 2, [opts, log](Evaluator& e, std::span<const Thunk> args, const Context& ctx) {
    EvidentialStatement es = e.statement_of(args[1], ctx);
    if (!es.find("printer")) {
      Observation final_obs = e.observation_of(args[0], ctx);
      es.sequences.push_back(ObservationSequence{"printer", {Observation::wildcard(), final_obs}});
    }
    recon::Verdict v = recon::check_claim(es, opts);
    std::vector<Value> out;
    for (const auto& run : v.explanations) out.push_back(to_value(run));
    if (log) log->verdicts.push_back(std::move(v));
    return Value::array(std::move(out));
  });
}

}  // namespace flucid
