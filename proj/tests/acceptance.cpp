// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <cstdio>
#include <functional>
#include <iostream>
#include <queue>
#include <set>
#include <sstream>

#include "flucid/forensic.hpp"
#include "flucid/stream_ops.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace flucid;

namespace {

// Collects the first few reasons a criterion failed.
struct Check {
  std::vector<std::string> problems;
  void expect(bool ok, const std::string& what) {
    if (!ok && problems.size() < 5) problems.push_back(what);
  }
};

recon::Verdict claim_of(const std::string& file, std::size_t max_len) {
  auto log = std::make_shared<ClaimLog>();
  auto program = support::load(file);
  auto ev = support::evaluator(max_len, log);
  ev->eval(*program, ev->global_env(), {});
  if (log->verdicts.size() != 1) throw std::runtime_error(file + ": expected one claim");
  return log->verdicts.front();
}

// The evidential statement a corpus program hands to its claim builtin.
EvidentialStatement statement_in(const std::string& file) {
  EvidentialStatement es;
  auto program = support::load(file);
  Evaluator ev;
  ev.define_builtin("invpsiacme", 2, [&](Evaluator& e, std::span<const Thunk> args, const Context& ctx) {
    es = e.statement_of(args[1], ctx);
    return Value::array({});
  });
  ev.eval(*program, ev.global_env(), {});
  return es;
}

oracle::Slots slots(const recon::PrinterState& s) { return {recon::to_string(s.d1), recon::to_string(s.d2)}; }

oracle::Trace trace(const recon::Run& r) {
  oracle::Trace t{slots(r.initial), {}};
  for (const auto& s : r.steps) t.steps.push_back({recon::to_string(s.event), slots(s.state)});
  return t;
}

Observation obs(const std::string& p, std::size_t min, std::optional<std::size_t> opt) {
  return Observation{Property::of(Value::atom(p)), min, opt};
}

void criterion1(Check& c) {
  auto v = claim_of("printer_alice.fl", 12);
  c.expect(!v.verdict, "verdict is true");
  c.expect(v.explanations.empty(), std::to_string(v.explanations.size()) + " explanations");
}

void criterion2(Check& c) {
  auto v = claim_of("printer_evidence_only.fl", 8);
  c.expect(!v.explanations.empty(), "no explanations");
  if (v.explanations.empty()) return;
  std::size_t shortest = SIZE_MAX;
  for (const auto& r : v.explanations) shortest = std::min(shortest, r.length());
  const auto& first = v.explanations.front();
  c.expect(shortest == 6 && first.length() == 6, "shortest run has " + std::to_string(shortest) + " events");
  c.expect(first.steps.size() >= 2 && first.steps[0].event == recon::Event::AddA &&
               first.steps[1].event == recon::Event::AddB,
           "shortest run does not begin add_A, add_B");

  std::set<oracle::Trace> got;
  for (const auto& r : v.explanations) got.insert(trace(r));
  const auto es = statement_in("printer_evidence_only.fl");
  // 3^8 event sequences from every state, keeping those without idle steps
  std::set<oracle::Trace> want = oracle::explanations(es, 8, false);
  c.expect(got == want, "explain found " + std::to_string(got.size()) + " runs, oracle " + std::to_string(want.size()));
}

void criterion3(Check& c) {
  std::size_t pairs = 0;
  for (const auto& s : recon::all_states()) {
    for (const auto& p : recon::inv_psi(s)) {
      c.expect(recon::psi(p.event, p.state) == s, "unsound pair into " + recon::to_string(s));
      ++pairs;
    }
  }
  for (recon::Event e : recon::kEvents)
    for (const auto& before : recon::all_states()) {
      const auto pre = recon::inv_psi(recon::psi(e, before));
      const auto hits = std::count_if(pre.begin(), pre.end(), [&](const recon::Predecessor& p) {
        return p.event == e && p.state == before;
      });
      c.expect(hits == 1, "(" + recon::to_string(e) + ", " + recon::to_string(before) + ") missing");
      c.expect(slots(recon::psi(e, before)) == oracle::printer_step(recon::to_string(e), slots(before)),
               "psi disagrees with the reference printer");
    }
  c.expect(pairs == 75, std::to_string(pairs) + " preimage pairs");
}

void criterion4(Check& c) {
  ObservationSequence os{"o", {obs("A", 3, 0), obs("B", 2, 0)}};
  const char* want[] = {"A", "A", "A", "B", "B"};
  for (std::size_t i = 0; i < 5; ++i) c.expect(forensic::at_obs(os, i) == Value::atom(want[i]), "at_obs mismatch");
  c.expect(forensic::indices_of(os, Value::atom("A")) == std::vector<std::size_t>{0, 1, 2}, "indices of A");
  c.expect(forensic::indices_of(os, Value::atom("B")) == std::vector<std::size_t>{3, 4}, "indices of B");
  auto program = support::load("expand_demo.fl");
  auto ev = support::evaluator();
  c.expect(ev->eval(*program, ev->global_env(), {}) == Value::atom("A"), "expand_demo.fl does not yield A");
}

void criterion5(Check& c) {
  ObservationSequence p{"o", {obs("P1", 1, 2), obs("P2", 1, 1)}};
  auto set = forensic::expand_sequence(p, std::nullopt);
  c.expect(set.streams.size() == 6, std::to_string(set.streams.size()) + " streams");
  c.expect(oracle::duration_choices(p).size() == 6, "oracle disagrees");

  std::size_t checked = 0;
  std::function<void(std::vector<Observation>)> sweep = [&](std::vector<Observation> prefix) {
    ObservationSequence os{"o", prefix};
    std::size_t product = 1;
    for (const auto& o : prefix) product *= *o.opt + 1;
    const auto got = forensic::expand_sequence(os, std::nullopt);
    const auto want = oracle::duration_choices(os);
    c.expect(got.streams.size() == product && want.size() == product, "count law fails for " + to_string(os));
    for (std::size_t k = 0; k < std::min(want.size(), got.streams.size()); ++k)
      c.expect(got.streams[k].durations == want[k], "durations differ for " + to_string(os));
    ++checked;
    if (prefix.size() == 3) return;
    for (std::size_t min = 0; min <= 2; ++min)
      for (std::size_t opt = 0; opt <= 2; ++opt) {
        auto next = prefix;
        next.push_back(obs("P", min, opt));
        sweep(next);
      }
  };
  sweep({});
  c.expect(checked == 820, std::to_string(checked) + " sequences checked");
}

ops::Intension S(const std::vector<Value>& xs) { return ops::from_stream(TagStream::of("d", xs)); }
Context tag(Tag t) { return Context{{"d", t}}; }

void criterion6(Check& c) {
  oracle::StreamGen gen(6);
  for (int i = 0; i < 1000; ++i) {
    const auto xs = gen.ints(), ys = gen.ints();
    const auto ps = gen.bools(xs.size());
    ops::Intension f = [&](const Context& ctx) { return ops::fby("d", S(xs), S(ys), ctx); };
    ops::Intension w = [&](const Context& ctx) { return ops::wvr("d", S(xs), S(ps), ctx); };
    ops::Intension nx = [&](const Context& ctx) { return ops::next("d", S(xs), ctx); };
    ops::Intension pv = [&](const Context& ctx) { return ops::prev("d", S(xs), ctx); };
    for (Tag t = 0; t < 10; ++t) {
      c.expect(ops::first("d", f, tag(t)) == oracle::at(xs, 0), "first(X fby Y) != first X");
      c.expect(ops::next("d", f, tag(t)) == oracle::at(ys, t), "next(X fby Y) != Y");
      c.expect(ops::pby("d", S(xs), S(ys), tag(t)) == ops::fby("d", S(ys), S(xs), tag(t)), "pby != flipped fby");
      c.expect(ops::asa("d", S(xs), S(ps), tag(t)) == ops::first("d", w, tag(t)), "asa != first . wvr");
      c.expect(ops::next("d", pv, tag(t)) == oracle::at(xs, t), "next(prev X) != X");
      c.expect(ops::prev("d", nx, tag(t + 1)) == oracle::at(xs, t + 1), "prev(next X) != X");
      c.expect(ops::prev("d", S(xs), tag(t + 1)) == oracle::at(xs, t), "prev X at n+1 != X at n");
    }
    c.expect(ops::prev("d", S(xs), tag(0)).is_eod(), "prev at 0 is not eod");
  }
}

void criterion7(Check& c) {
  auto empty = TagStream::of("d", {});
  auto ab = TagStream::of("d", {Value::atom("a"), Value::atom("b")});
  c.expect(forensic::combine(empty, Value::atom("e")).length() == 0, "combine(eod, e) is not eod");
  c.expect(forensic::product(ab, empty).length() == 0, "product(s1, eod) is not eod");
  c.expect(forensic::product(empty, ab).length() == 0, "product(eod, s2) is not eod");

  oracle::StreamGen gen(7);
  for (int i = 0; i < 1000; ++i) {
    auto s1 = TagStream::of("d", gen.ints(6)), s2 = TagStream::of("d", gen.ints(6));
    c.expect(forensic::product(s1, s2).length() == s1.length() * s2.length(), "|product| != |s1| * |s2|");
  }

  // the Forensic Lucid definitions from the corpus agree
  auto program = support::load("product.fl");
  auto ev = support::evaluator();
  ops::Intension x = [&](const Context& ctx) { return ev->eval(*program, ev->global_env(), ctx); };
  auto want = forensic::product(ab, TagStream::of("d", {Value::atom("x"), Value::atom("y")}));
  c.expect(ops::materialize(x, "d", tag(0)).elements == want.elements, "product.fl disagrees with product");
}

void criterion8(Check& c) {
  auto program = support::load("raining.fl");
  auto ev = support::evaluator();
  const char* grid[3] = {"FFTTTFFFT", "FFFFTTTFF", "FTTTTFFFF"};
  int cells = 0;
  for (Tag place = 1; place <= 3; ++place)
    for (Tag day = 1; day <= 9; ++day) {
      const Value v = ev->eval(*program, ev->global_env(), Context{{"place", place}, {"time", day}});
      c.expect(v == Value::boolean(grid[place - 1][day - 1] == 'T'),
               "place " + std::to_string(place) + " day " + std::to_string(day));
      ++cells;
    }
  c.expect(cells == 27, "grid size");

  for (const auto& file : support::corpus()) {
    auto p = support::load(file);
    auto plain = support::evaluator(8);
    auto cached = support::evaluator(8);
    Warehouse wh;
    std::vector<Context> ctxs;
    if (file == "raining.fl") {
      for (Tag place = 1; place <= 3; ++place)
        for (Tag t = 0; t <= 10; ++t) ctxs.push_back(Context{{"place", place}, {"time", t}});
    } else {
      for (Tag t = 0; t <= 3; ++t) ctxs.push_back(tag(t));
    }
    for (const auto& ctx : ctxs)
      c.expect(cached->eval_cached(*p, cached->global_env(), ctx, wh) == plain->eval(*p, plain->global_env(), ctx),
               file + ": eval_cached differs at " + to_string(ctx));
  }
}

void criterion9(Check& c) {
  auto ev = support::evaluator();
  for (const auto& file : support::corpus()) {
    try {
      auto tree = support::load(file);
      check_bindings(*tree, ev->builtin_names());
      auto again = parse_source(pretty_print(*tree));
      c.expect(same_structure(*tree, *again), file + " does not round-trip");
    } catch (const std::exception& e) {
      c.expect(false, file + ": " + e.what());
    }
  }
  const std::pair<const char*, const char*> goldens[] = {
      {"run printer_alice.fl --json", "printer_alice.json"},
      {"run printer_evidence_only.fl --max-len 8 --json", "printer_evidence_only.json"},
      {"run expand_demo.fl --json", "expand_demo.json"},
  };
  for (const auto& [args, file] : goldens) {
    const std::string want = support::read(std::string(FLUCID_GOLDEN_DIR) + "/" + file);
    auto a = support::cli(args), b = support::cli(args);
    c.expect(a.code == 0 && !want.empty() && a.out == want && b.out == want, std::string(file) + " is not byte-stable");
  }
}

void criterion10(Check& c) {
  const recon::PrinterState start{recon::Slot::Empty, recon::Slot::Empty};
  std::set<recon::PrinterState> seen{start};
  std::queue<recon::PrinterState> todo;
  todo.push(start);
  while (!todo.empty()) {
    const auto s = todo.front();
    todo.pop();
    for (recon::Event e : recon::kEvents)
      if (seen.insert(recon::psi(e, s)).second) todo.push(recon::psi(e, s));
  }
  c.expect(!seen.count({recon::Slot::A, recon::Slot::A}), "(A,A) reachable");
  c.expect(!seen.count({recon::Slot::B, recon::Slot::B}), "(B,B) reachable");
}

}  // namespace

int main() {
  const std::pair<const char*, void (*)(Check&)> criteria[] = {
      {"Alice's claim: verdict false, no explanations", criterion1},
      {"evidence-only: 6-event shortest run from add_A, add_B, equal to brute force at max_len 8", criterion2},
      {"inv_psi sound and complete over 75 pairs and 25 states", criterion3},
      {"observation sequence (A,3,0)(B,2,0) read by index", criterion4},
      {"expansion counts: 6 streams, product of (opt+1) for n<=3, min<=2, opt<=2", criterion5},
      {"stream operator laws over 1000 random streams", criterion6},
      {"combine/product eod cases and |s1|*|s2|", criterion7},
      {"raining fixtures (27 cells) and eval_cached == eval on the corpus", criterion8},
      {"corpus parses, round-trips, JSON goldens byte-stable", criterion9},
      {"(A,A) and (B,B) unreachable from (empty,empty)", criterion10},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.problems.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = c.problems.empty();
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << name << "\n";
    for (const auto& p : c.problems) std::cout << "    " << p << "\n";
  }
  std::cout << (n - failed) << "/" << n << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
