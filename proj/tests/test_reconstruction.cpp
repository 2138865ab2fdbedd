#include <doctest.h>

#include <queue>
#include <set>

#include "flucid/errors.hpp"
#include "flucid/reconstruction.hpp"
#include "oracles.hpp"

using namespace flucid;
using namespace flucid::recon;

namespace {

PrinterState st(const char* text) { return *parse_state(text); }

oracle::Slots slots(const PrinterState& s) { return {to_string(s.d1), to_string(s.d2)}; }

oracle::Trace trace(const Run& r) {
  oracle::Trace t{slots(r.initial), {}};
  for (const auto& s : r.steps) t.steps.push_back({to_string(s.event), slots(s.state)});
  return t;
}

std::set<oracle::Trace> traces(const std::vector<Run>& runs) {
  std::set<oracle::Trace> out;
  for (const auto& r : runs) out.insert(trace(r));
  return out;
}

Observation obs(Value p, std::size_t min, std::optional<std::size_t> opt) {
  return Observation{Property::of(std::move(p)), min, opt};
}

Value atom(const char* s) { return Value::atom(s); }

EvidentialStatement evidence_only() {
  return {"es",
          {{"printer", {Observation::wildcard(), obs(atom("B_deleted"), 1, 0)}},
           {"manuf", {obs(atom("empty"), 1, 0), Observation::wildcard()}}}};
}

EvidentialStatement alice_claim() {
  auto es = evidence_only();
  es.sequences.push_back(
      {"alice", {obs(Value::set({"add_B", "take"}), 0, std::nullopt), obs(atom("B_deleted"), 1, 0)}});
  return es;
}

std::vector<std::string> events(const Run& r) {
  std::vector<std::string> out;
  for (const auto& s : r.steps) out.push_back(to_string(s.event));
  return out;
}

}  // namespace

TEST_CASE("psi follows the manufacturer's rules") {
  CHECK(psi(Event::AddA, st("empty,empty")) == st("A,empty"));
  CHECK(psi(Event::AddB, st("A,empty")) == st("A,B"));
  CHECK(psi(Event::Take, st("A,B")) == st("A_deleted,B"));
  CHECK(psi(Event::Take, st("A_deleted,B")) == st("A_deleted,B_deleted"));
  CHECK(psi(Event::Take, st("B,empty")) == st("B_deleted,empty"));
  CHECK(psi(Event::AddB, st("B_deleted,A")) == st("B,A"));
  CHECK(psi(Event::AddA, st("A,empty")) == st("A,empty"));
  CHECK(psi(Event::AddA, st("B,B")) == st("B,B"));
  CHECK(psi(Event::Take, st("empty,A_deleted")) == st("empty,A_deleted"));
}

TEST_CASE("psi agrees with the reference printer on all 75 pairs") {
  for (Event c : kEvents)
    for (const auto& s : all_states()) CHECK(slots(psi(c, s)) == oracle::printer_step(to_string(c), slots(s)));
}

TEST_CASE("parse_state") {
  CHECK(parse_state("A, B_deleted") == PrinterState{Slot::A, Slot::BDeleted});
  CHECK_FALSE(parse_state("A"));
  CHECK_FALSE(parse_state("A,C"));
  CHECK(all_states().size() == 25);
}

TEST_CASE("inv_psi examples") {
  auto pre = inv_psi(st("B_deleted,B_deleted"));
  REQUIRE(pre.size() == 3);
  CHECK(pre[0] == Predecessor{Event::Take, st("B,B_deleted"), 'B'});
  CHECK(pre[1] == Predecessor{Event::Take, st("B_deleted,B"), 'D'});
  CHECK(pre[2] == Predecessor{Event::Take, st("B_deleted,B_deleted"), 'E'});

  auto a_empty = inv_psi(st("A,empty"));
  std::set<std::pair<Event, PrinterState>> got;
  for (const auto& p : a_empty) got.insert({p.event, p.state});
  CHECK(got == std::set<std::pair<Event, PrinterState>>{{Event::AddA, st("empty,empty")},
                                                        {Event::AddA, st("A_deleted,empty")},
                                                        {Event::AddA, st("B_deleted,empty")},
                                                        {Event::AddA, st("A,empty")}});
}

TEST_CASE("inv_psi is sound and complete") {
  std::size_t pairs = 0;
  for (const auto& s : all_states()) {
    auto pre = inv_psi(s);
    for (const auto& p : pre) {
      CHECK(psi(p.event, p.state) == s);
      CHECK(p.family == family_of(p.event, p.state));
    }
    pairs += pre.size();
  }
  CHECK(pairs == 75);
  for (Event c : kEvents)
    for (const auto& before : all_states()) {
      auto pre = inv_psi(psi(c, before));
      CHECK(std::count_if(pre.begin(), pre.end(), [&](const Predecessor& p) {
              return p.event == c && p.state == before;
            }) == 1);
    }
}

TEST_CASE("families cover all thirteen branches") {
  std::set<char> seen;
  for (Event c : kEvents)
    for (const auto& s : all_states()) seen.insert(family_of(c, s));
  CHECK(seen == std::set<char>{'A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'I', 'J', 'K', 'L', 'M'});
  CHECK(family_of(Event::Take, st("empty,B")) == 'D');
  CHECK(family_of(Event::AddA, st("B,B")) == 'L');
  CHECK(family_of(Event::AddB, st("A,A")) == 'K');
  CHECK(family_of(Event::AddB, st("A_deleted,A")) == 'G');
  CHECK(family_of(Event::AddA, st("B,empty")) == 'H');
}

TEST_CASE("(A,A) and (B,B) are unreachable from (empty,empty)") {
  std::set<PrinterState> seen{st("empty,empty")};
  std::queue<PrinterState> todo;
  todo.push(st("empty,empty"));
  while (!todo.empty()) {
    auto s = todo.front();
    todo.pop();
    for (Event c : kEvents)
      if (seen.insert(psi(c, s)).second) todo.push(psi(c, s));
  }
  CHECK_FALSE(seen.count(st("A,A")));
  CHECK_FALSE(seen.count(st("B,B")));
  CHECK(seen.count(st("B_deleted,B_deleted")));
  // d1 is always filled first, so d2 is busy only while d1 is
  for (const auto& s : seen) CHECK((s.d2 == Slot::Empty || s.d1 != Slot::Empty));
}

TEST_CASE("matches") {
  CHECK(matches(Property::of(atom("B_deleted")), st("B_deleted,B_deleted"), std::nullopt));
  CHECK_FALSE(matches(Property::of(atom("B_deleted")), st("B_deleted,empty"), std::nullopt));
  CHECK(matches(Property::of(atom("A,empty")), st("A,empty"), Event::AddA));
  CHECK(matches(Property::of(Value::set({"take"})), st("A,empty"), std::nullopt));
  CHECK_FALSE(matches(Property::of(Value::set({"take"})), st("A,empty"), Event::AddA));
  CHECK(matches(Property::any(), st("A,empty"), Event::AddA));
  CHECK_THROWS_AS(matches(Property::of(atom("C")), st("A,empty"), std::nullopt), ValidationError);
  CHECK_THROWS_AS(matches(Property::of(Value::set({"print"})), st("A,empty"), std::nullopt), ValidationError);
  CHECK_THROWS_AS(matches(Property::of(Value::integer(1)), st("A,empty"), std::nullopt), ValidationError);
}

TEST_CASE("satisfies examples") {
  Run r{st("empty,empty"), {{Event::AddA, st("A,empty")}, {Event::Take, st("A_deleted,empty")}}};
  ObservationSequence exact{"s", {obs(atom("empty"), 1, 0), obs(atom("A,empty"), 1, 0), obs(atom("A_deleted,empty"), 1, 0)}};
  CHECK(satisfies(r, exact, 8));
  ObservationSequence too_long{"s", {obs(atom("empty"), 2, 0), Observation::wildcard()}};
  CHECK_FALSE(satisfies(r, too_long, 8));
  ObservationSequence only_any{"s", {Observation::wildcard()}};
  CHECK(satisfies(r, only_any, 8));
  ObservationSequence no_take{"s", {obs(Value::set({"add_A", "add_B"}), 0, std::nullopt)}};
  CHECK_FALSE(satisfies(r, no_take, 8));
}

TEST_CASE("satisfies agrees with brute-force duration assignment") {
  std::mt19937 rng(808);
  std::vector<Value> props;
  for (const auto& s : all_states()) props.push_back(atom(to_string(s).c_str()));
  for (Slot x : kSlots) props.push_back(atom(to_string(x).c_str()));
  props.push_back(Value::set({"take"}));
  props.push_back(Value::set({"add_A", "add_B"}));
  props.push_back(Value::set({"add_B", "take"}));

  for (int i = 0; i < 2000; ++i) {
    Run r{all_states()[rng() % 25], {}};
    PrinterState s = r.initial;
    const std::size_t len = rng() % 6;
    for (std::size_t k = 0; k < len; ++k) {
      Event e = kEvents[rng() % 3];
      s = psi(e, s);
      r.steps.push_back({e, s});
    }
    ObservationSequence os{"s", {}};
    const std::size_t n = 1 + rng() % 3;
    for (std::size_t k = 0; k < n; ++k) {
      if (rng() % 5 == 0) {
        os.observations.push_back(Observation::wildcard());
        continue;
      }
      // bias towards the run's own states so matches are common
      Value p = rng() % 2 ? atom(to_string(k == 0 ? r.initial : r.final_state()).c_str()) : props[rng() % props.size()];
      std::optional<std::size_t> opt;
      if (rng() % 4) opt = rng() % 3;
      os.observations.push_back(obs(p, rng() % 3, opt));
    }
    CHECK(satisfies(r, os, 8) == oracle::trace_satisfies(trace(r), os));
  }
}

TEST_CASE("Alice's claim has no explanation") {
  auto v = check_claim(alice_claim(), {12, false});
  CHECK_FALSE(v.verdict);
  CHECK(v.explanations.empty());
  CHECK(check_claim(alice_claim(), {8, true}).explanations.empty());
}

TEST_CASE("evidence alone is explained, shortest run starts add_A, add_B") {
  SearchStats stats;
  auto runs = explain(evidence_only(), {8, false}, &stats);
  REQUIRE_FALSE(runs.empty());
  CHECK(runs.front().length() == 6);
  CHECK(events(runs.front()) == std::vector<std::string>{"add_A", "add_B", "take", "take", "add_B", "take"});
  CHECK(runs.front().initial == st("empty,empty"));
  CHECK(runs.front().final_state() == st("B_deleted,B_deleted"));
  CHECK(stats.states_visited > 0);
  for (const auto& r : runs) {
    CHECK(is_consistent(r));
    CHECK(r.length() <= 8);
  }
  CHECK(std::is_sorted(runs.begin(), runs.end(), run_less));
}

TEST_CASE("explain equals the forward oracle") {
  const std::vector<EvidentialStatement> cases = {
      evidence_only(),
      alice_claim(),
      {"story", {{"printer", {Observation::wildcard(), obs(atom("B_deleted,B_deleted"), 1, 0)}},
                 {"manuf", {obs(atom("empty,empty"), 1, 0), Observation::wildcard()}}}},
      {"late", {{"printer", {obs(atom("empty"), 1, 0), obs(Value::set({"add_A", "add_B"}), 1, 2),
                             Observation::wildcard(), obs(atom("A_deleted,B"), 1, 0)}}}},
  };
  for (const auto& es : cases)
    for (std::size_t max_len : {1, 4, 8})
      for (bool noops : {false, true}) {
        if (noops && max_len == 8) continue;  // the no-op oracle at 8 steps from 25 states is slow
        CAPTURE(es.name);
        CAPTURE(max_len);
        CAPTURE(noops);
        CHECK(traces(explain(es, {max_len, noops})) == oracle::explanations(es, max_len, noops));
      }
}

TEST_CASE("evidence-only at max_len 8 equals the exhaustive 3^8 sweep") {
  const auto es = evidence_only();
  std::set<oracle::Trace> want;
  for (auto& t : oracle::all_traces({"empty", "empty"}, 8))
    if (!t.has_noop() && oracle::trace_explains(t, es)) want.insert(std::move(t));
  CHECK(traces(explain(es, {8, false})) == want);
}

TEST_CASE("longer search horizons only add explanations") {
  const auto es = evidence_only();
  std::set<oracle::Trace> prev;
  for (std::size_t n = 1; n <= 10; ++n) {
    auto now = traces(explain(es, {n, false}));
    CHECK(std::includes(now.begin(), now.end(), prev.begin(), prev.end()));
    prev = std::move(now);
  }
}

TEST_CASE("oracle_enumerate") {
  auto runs = oracle_enumerate(st("empty,empty"), [](const PrinterState& s) { return s == st("B_deleted,B_deleted"); }, 6);
  REQUIRE(runs.size() == 1);
  CHECK(events(runs[0]) == std::vector<std::string>{"add_A", "add_B", "take", "take", "add_B", "take"});
  CHECK(oracle_enumerate(st("empty,empty"), [](const PrinterState&) { return true; }, 2).size() == 1 + 3 + 9);
  CHECK(oracle_enumerate(st("empty,empty"), [](const PrinterState& s) { return s == st("A,A"); }, 8).empty());
}

TEST_CASE("explain argument checks") {
  CHECK_THROWS_AS(explain(evidence_only(), {0, false}), ValidationError);
  EvidentialStatement none{"es", {{"manuf", {Observation::wildcard()}}}};
  CHECK_THROWS_AS(explain(none, {4, false}), ValidationError);
  auto zero = check_claim(evidence_only(), {0, false});
  CHECK_FALSE(zero.verdict);
  EvidentialStatement trivial{"es", {{"printer", {obs(atom("empty"), 1, 0)}}}};
  auto v = check_claim(trivial, {0, false});
  REQUIRE(v.explanations.size() == 1);
  CHECK(v.explanations[0].length() == 0);
}
