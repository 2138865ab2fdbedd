#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "flucid/case_builtins.hpp"
#include "flucid/forensic.hpp"
#include "flucid/parser.hpp"
#include "flucid/stream_ops.hpp"

using namespace flucid;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitProgram = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json to_json(const Value& v) {
  if (v.is_atom()) return v.as_atom().name;
  if (v.is_int()) return v.as_int();
  if (v.is_bool()) return v.as_bool();
  if (v.is_eod()) return nullptr;
  if (v.is_inf()) return "+inf";
  if (v.is_set()) {
    json items = json::array();
    for (const auto& a : v.as_set().atoms) items.push_back(a.name);
    return json{{"unordered", items}};
  }
  json items = json::array();
  for (const auto& x : v.as_array().items) items.push_back(to_json(x));
  return items;
}

// A value sampled along one dimension; arrays are sampled element by element.
struct Sampled {
  std::optional<TagStream> stream;
  std::vector<Sampled> items;
};

Sampled sample(const ops::Intension& x, const std::string& dim, const Context& at, std::size_t limit,
               bool transpose) {
  Value head = x(at.with(dim, 0));
  if (transpose && head.is_array()) {
    Sampled s;
    for (std::size_t i = 0; i < head.as_array().items.size(); ++i) {
      ops::Intension item = [x, i](const Context& c) {
        Value v = x(c);
        if (!v.is_array() || i >= v.as_array().items.size()) return Value::eod();
        return v.as_array().items[i];
      };
      s.items.push_back(sample(item, dim, at, limit, transpose));
    }
    return s;
  }
  return Sampled{ops::materialize(x, dim, at, limit), {}};
}

std::string render(const Sampled& s) {
  constexpr std::size_t kShown = 20;
  if (s.stream && !s.stream->bounded && s.stream->length() > kShown) {
    TagStream head = *s.stream;
    head.elements.resize(kShown);
    return to_string(head);
  }
  if (s.stream) return to_string(*s.stream);
  std::string out = "[";
  for (std::size_t i = 0; i < s.items.size(); ++i) out += (i ? ", " : "") + render(s.items[i]);
  return out + "]";
}

json sampled_json(const Sampled& s) {
  if (!s.stream) {
    json items = json::array();
    for (const auto& i : s.items) items.push_back(sampled_json(i));
    return items;
  }
  json elems = json::array();
  for (const auto& v : s.stream->elements) elems.push_back(to_json(v));
  return json{{"dimension", s.stream->dimension}, {"elements", elems}, {"bounded", s.stream->bounded}};
}

json run_json(const recon::Run& r) {
  json steps = json::array();
  for (const auto& st : r.steps)
    steps.push_back({{"event", recon::to_string(st.event)}, {"state", recon::to_string(st.state)}});
  return {{"initial", recon::to_string(r.initial)}, {"steps", steps}};
}

std::string run_text(const recon::Run& r) {
  std::string out = recon::to_string(r.initial);
  for (const auto& st : r.steps) out += " --" + recon::to_string(st.event) + "--> " + recon::to_string(st.state);
  return out;
}

json verdict_json(const recon::Verdict& v) {
  json runs = json::array();
  for (const auto& r : v.explanations) runs.push_back(run_json(r));
  return {{"statement", v.statement},
          {"verdict", v.verdict},
          {"explanations", runs},
          {"stats", {{"states_visited", v.stats.states_visited}, {"runs_enumerated", v.stats.runs_enumerated}}}};
}

void print_verdict(const recon::Verdict& v) {
  std::cout << "statement: " << v.statement << "\n"
            << "verdict: " << (v.verdict ? "true" : "false") << "\n"
            << "explanations: " << v.explanations.size() << "\n";
  for (std::size_t i = 0; i < v.explanations.size(); ++i)
    std::cout << "  " << (i + 1) << ". " << run_text(v.explanations[i]) << "\n";
  std::cout << "states visited: " << v.stats.states_visited << ", runs enumerated: " << v.stats.runs_enumerated
            << "\n";
}

std::string diagnostic(const std::string& file, const Error& e) {
  std::string where = file;
  if (e.pos()) where += ":" + std::to_string(e.pos()->line) + ":" + std::to_string(e.pos()->column);
  return where + ": " + e.kind() + ": " + e.what();
}

struct RunOptions {
  std::string file;
  std::size_t max_len = 12;
  bool include_noops = false;
  bool json = false;
  bool timing = false;
  std::string along;
  bool transpose = false;
  std::vector<std::string> at;
};

Context context_arg(const std::vector<std::string>& bindings) {
  Context ctx;
  for (const auto& b : bindings) {
    const auto eq = b.find('=');
    std::int64_t tag = -1;
    if (eq != std::string::npos && eq > 0) {
      try {
        std::size_t used = 0;
        tag = std::stoll(b.substr(eq + 1), &used);
        if (used != b.size() - eq - 1) tag = -1;
      } catch (const std::exception&) {
        tag = -1;
      }
    }
    if (tag < 0) throw UsageError("--at expects dim=tag with a non-negative tag, got '" + b + "'");
    ctx = ctx.with(b.substr(0, eq), tag);
  }
  return ctx;
}

int cmd_run(const RunOptions& o) {
  const std::string source = read_file(o.file);
  const Context at = context_arg(o.at);
  const auto start = std::chrono::steady_clock::now();
  try {
    Evaluator ev(Evaluator::options_from_env());
    auto log = std::make_shared<ClaimLog>();
    install_printer_case(ev, {o.max_len, o.include_noops}, log);
    NodePtr program = parse_source(source);
    check_bindings(*program, ev.builtin_names());

    Value value;
    std::optional<Sampled> sampled;
    run_with_large_stack([&] {
      if (o.along.empty()) {
        value = ev.eval(*program, ev.global_env(), at);
      } else {
        ops::Intension x = [&](const Context& c) { return ev.eval(*program, ev.global_env(), c); };
        sampled = sample(x, o.along, at, ev.options().scan_limit, o.transpose);
      }
    });
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (o.json) {
      json out;
      out["program"] = o.file;
      if (log->verdicts.size() == 1) {
        const json verdict = verdict_json(log->verdicts.front());
        for (const auto& [k, v] : verdict.items()) out[k] = v;
        if (o.timing) out["stats"]["wall_time_ms"] = ms;
      } else {
        if (!log->verdicts.empty()) {
          json claims = json::array();
          for (const auto& v : log->verdicts) claims.push_back(verdict_json(v));
          out["claims"] = claims;
        }
        out["value"] = sampled ? sampled_json(*sampled) : to_json(value);
        if (o.timing) out["stats"] = {{"wall_time_ms", ms}};
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    for (const auto& v : log->verdicts) print_verdict(v);
    if (log->verdicts.empty()) std::cout << (sampled ? render(*sampled) : to_string(value)) << "\n";
    if (o.timing) std::cout << "wall time: " << ms << " ms\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << diagnostic(o.file, e) << "\n";
    return kExitProgram;
  }
}

struct OracleOptions {
  std::string final_state;
  std::string initial = "empty,empty";
  std::size_t max_len = 12;
  bool include_noops = false;
  bool cross_check = false;
  bool json = false;
};

recon::PrinterState state_arg(const std::string& text, const char* flag) {
  auto s = recon::parse_state(text);
  if (!s) throw UsageError(std::string(flag) + ": '" + text + "' is not a state such as B_deleted,B_deleted");
  return *s;
}

bool has_noop(const recon::Run& r) {
  recon::PrinterState s = r.initial;
  for (const auto& st : r.steps) {
    if (st.state == s) return true;
    s = st.state;
  }
  return false;
}

int cmd_oracle(const OracleOptions& o) {
  const recon::PrinterState final_state = state_arg(o.final_state, "--final");
  const recon::PrinterState initial = state_arg(o.initial, "--initial");
  auto runs = recon::oracle_enumerate(initial, [&](const recon::PrinterState& s) { return s == final_state; },
                                      o.max_len);
  if (!o.include_noops) std::erase_if(runs, has_noop);

  std::optional<bool> equal;
  std::size_t explained = 0;
  if (o.cross_check) {
    auto observe = [](const recon::PrinterState& s) {
      return Observation{Property::of(Value::atom(recon::to_string(s))), 1, 0};
    };
    EvidentialStatement es{"oracle",
                           {{"printer", {Observation::wildcard(), observe(final_state)}},
                            {"manuf", {observe(initial), Observation::wildcard()}}}};
    auto verdict = recon::check_claim(es, {o.max_len, o.include_noops});
    explained = verdict.explanations.size();
    equal = verdict.explanations == runs;
  }

  if (o.json) {
    json list = json::array();
    for (const auto& r : runs) list.push_back(run_json(r));
    json out{{"initial", recon::to_string(initial)},
             {"final", recon::to_string(final_state)},
             {"max_len", o.max_len},
             {"runs", list}};
    if (equal) out["cross_check"] = {{"explanations", explained}, {"equal", *equal}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "runs: " << runs.size() << "\n";
    for (std::size_t i = 0; i < runs.size(); ++i) std::cout << "  " << (i + 1) << ". " << run_text(runs[i]) << "\n";
    if (equal)
      std::cout << "cross-check: " << (*equal ? "equal" : "MISMATCH") << " (explain found " << explained << ")\n";
  }
  return equal && !*equal ? kExitMismatch : 0;
}

// Reads a sequence literal such as (A,3,0)(B,2,0); bare names are atoms.
Observation observation_from(const AstNode& n) {
  if (n.is<ast::Wildcard>()) return Observation::wildcard();
  const auto* t = n.as<ast::TupleObs>();
  if (!t) throw ValidationError("expected an observation (P, min, opt)", n.pos);
  Observation o;
  if (const auto* id = t->property->as<ast::Ident>()) {
    o.property = Property::of(Value::atom(id->name));
  } else if (const auto* lit = t->property->as<ast::Literal>()) {
    o.property = Property::of(lit->value);
  } else if (const auto* set = t->property->as<ast::UnorderedSet>()) {
    PropertySet ps;
    for (const auto& item : set->items) {
      if (const auto* i = item->as<ast::Ident>()) ps.atoms.insert(Atom{i->name});
      else if (const auto* l = item->as<ast::Literal>(); l && l->value.is_atom()) ps.atoms.insert(l->value.as_atom());
      else throw ValidationError("property sets hold atoms only", item->pos);
    }
    o.property = Property::of(Value(std::move(ps)));
  } else if (!t->property->is<ast::Wildcard>()) {
    throw ValidationError("unsupported property expression", t->property->pos);
  }
  auto count = [](const AstNode& x, const char* what) -> std::optional<std::size_t> {
    const auto* lit = x.as<ast::Literal>();
    if (lit && lit->value.is_inf()) return std::nullopt;
    if (!lit || !lit->value.is_int() || lit->value.as_int() < 0)
      throw ValidationError(std::string(what) + " must be a non-negative integer", x.pos);
    return static_cast<std::size_t>(lit->value.as_int());
  };
  auto min = count(*t->min, "min");
  if (!min) throw ValidationError("min cannot be +inf", t->min->pos);
  o.min = *min;
  o.opt = count(*t->opt, "opt");
  return o;
}

const AstNode* find_sequence(const AstNode& n, std::string& name) {
  if (const auto* w = n.as<ast::Where>()) {
    for (const auto& d : w->decls) {
      const auto& decl = std::get<ast::Decl>(d->node);
      if (decl.kind == DeclKind::ObservationSequence) {
        name = decl.name;
        return decl.value.get();
      }
      if (decl.value)
        if (const AstNode* inner = find_sequence(*decl.value, name)) return inner;
    }
    return find_sequence(*w->body, name);
  }
  return nullptr;
}

ObservationSequence sequence_from(const std::string& source) {
  NodePtr root = parse_source(source);
  ObservationSequence os{"obs", {}};
  const AstNode* node = find_sequence(*root, os.name);
  if (!node) node = root.get();
  while (const auto* w = node->as<ast::Where>()) node = w->body.get();
  if (const auto* arr = node->as<ast::ArrayExpr>()) {
    for (const auto& item : arr->items) os.observations.push_back(observation_from(*item));
  } else {
    os.observations.push_back(observation_from(*node));
  }
  return os;
}

struct ExpandOptions {
  std::string input;
  std::optional<std::size_t> cap;
  bool json = false;
  std::string index_of;
};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " " : "") + parts[i];
  return out;
}

int cmd_expand(const ExpandOptions& o) {
  std::string label = "<inline>";
  std::string source = o.input;
  if (std::ifstream probe(o.input); probe) {
    label = o.input;
    source = read_file(o.input);
  }
  try {
    const ObservationSequence os = sequence_from(source);
    for (const auto& ob : os.observations)
      if (!ob.opt && !o.cap) throw UsageError("sequence has a +inf duration; pass --cap N");
    const auto set = forensic::expand_sequence(os, o.cap);

    if (o.json) {
      json streams = json::array();
      for (const auto& s : set.streams) {
        json props = json::array();
        for (const auto& p : s.properties) props.push_back(to_string(p));
        streams.push_back({{"durations", s.durations}, {"properties", props}});
      }
      json out{{"sequence", to_string(os)}, {"cap", o.cap ? json(*o.cap) : json(nullptr)}, {"streams", streams}};
      if (!o.index_of.empty() && os.is_fixed())
        out["indices"] = forensic::indices_of(os, Value::atom(o.index_of));
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    std::cout << to_string(os) << ": " << set.streams.size() << " stream" << (set.streams.size() == 1 ? "" : "s")
              << "\n";
    for (std::size_t k = 0; k < set.streams.size(); ++k) {
      const auto& s = set.streams[k];
      std::vector<std::string> props, idx;
      for (std::size_t i = 0; i < s.length(); ++i) {
        props.push_back(to_string(s.properties[i]));
        idx.push_back(std::to_string(i));
      }
      std::vector<std::string> durs;
      for (auto d : s.durations) durs.push_back(std::to_string(d));
      std::cout << "\nstream " << (k + 1) << " (durations " << join(durs) << ")\n"
                << "Observed property (context): " << (props.empty() ? "(empty)" : join(props)) << "\n"
                << "Sub-dimension index: " << (idx.empty() ? "(none)" : join(idx)) << "\n";
    }
    if (os.is_fixed()) {
      std::cout << "\n";
      const auto n = set.streams.front().length();
      for (std::size_t i = 0; i < n; ++i)
        std::cout << "o @." << os.name << " " << i << " = " << to_string(forensic::at_obs(os, i)) << "\n";
      if (!o.index_of.empty()) {
        std::vector<std::string> at;
        for (auto i : forensic::indices_of(os, Value::atom(o.index_of))) at.push_back(std::to_string(i));
        std::cout << "o @." << os.name << " " << o.index_of << " = " << join(at) << "\n";
      }
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << diagnostic(label, e) << "\n";
    return kExitProgram;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forensic Lucid interpreter and printer-case reconstruction"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Evaluate a .fl program");
  run_cmd->add_option("file", run.file, "Program file")->required();
  run_cmd->add_option("--max-len", run.max_len, "Longest explanation searched")->capture_default_str();
  run_cmd->add_flag("--include-noops", run.include_noops, "Keep explanations with steps that change nothing");
  run_cmd->add_flag("--json", run.json, "JSON report");
  run_cmd->add_flag("--timing", run.timing, "Report wall time");
  run_cmd->add_option("--along", run.along, "Print the result as a stream along this dimension");
  run_cmd->add_flag("--transpose", run.transpose, "With --along, print an array result as an array of streams");
  run_cmd->add_option("--at", run.at, "Evaluate at dim=tag (repeatable)");

  OracleOptions oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force forward enumeration of printer runs");
  oracle_cmd->add_option("--final", oracle.final_state, "Final state, e.g. B_deleted,B_deleted")->required();
  oracle_cmd->add_option("--initial", oracle.initial, "Initial state")->capture_default_str();
  oracle_cmd->add_option("--max-len", oracle.max_len, "Longest event sequence")->capture_default_str();
  oracle_cmd->add_flag("--include-noops", oracle.include_noops, "Keep runs with steps that change nothing");
  oracle_cmd->add_flag("--cross-check", oracle.cross_check, "Compare against backward search; exit 1 on mismatch");
  oracle_cmd->add_flag("--json", oracle.json, "JSON report");

  ExpandOptions expand;
  auto* expand_cmd = app.add_subcommand("expand", "List the duration expansions of an observation sequence");
  expand_cmd->add_option("sequence", expand.input, "Inline sequence such as (A,3,0)(B,2,0), or a file")->required();
  expand_cmd->add_option("--cap", expand.cap, "Bound for +inf durations");
  expand_cmd->add_flag("--json", expand.json, "JSON output");
  expand_cmd->add_option("--index-of", expand.index_of, "Also list the indices holding this property");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*oracle_cmd) return cmd_oracle(oracle);
    return cmd_expand(expand);
  } catch (const UsageError& e) {
    std::cerr << "flucid: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "flucid: " << e.what() << "\n";
    return kExitProgram;
  }
}
