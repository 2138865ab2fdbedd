#include "flucid/reconstruction.hpp"

#include <algorithm>

#include "flucid/errors.hpp"

namespace flucid::recon {

namespace {

constexpr std::array<std::string_view, 5> kSlotNames = {"empty", "A", "B", "A_deleted", "B_deleted"};
constexpr std::array<std::string_view, 3> kEventNames = {"add_A", "add_B", "take"};

std::size_t index_of(Slot s) { return static_cast<std::size_t>(s); }
std::size_t index_of(const PrinterState& s) { return index_of(s.d1) * kSlots.size() + index_of(s.d2); }

bool holds(Slot s, Slot job) { return s == job; }

}  // namespace

bool is_free(Slot s) { return s == Slot::Empty || s == Slot::ADeleted || s == Slot::BDeleted; }

std::string to_string(Slot s) { return std::string(kSlotNames[index_of(s)]); }
std::string to_string(Event e) { return std::string(kEventNames[static_cast<std::size_t>(e)]); }
std::string to_string(const PrinterState& s) { return to_string(s.d1) + "," + to_string(s.d2); }

std::optional<Slot> parse_slot(std::string_view text) {
  for (std::size_t i = 0; i < kSlotNames.size(); ++i)
    if (kSlotNames[i] == text) return kSlots[i];
  return std::nullopt;
}

std::optional<Event> parse_event(std::string_view text) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i)
    if (kEventNames[i] == text) return kEvents[i];
  return std::nullopt;
}

std::optional<PrinterState> parse_state(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  std::string_view rest = text.substr(comma + 1);
  if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  auto d1 = parse_slot(text.substr(0, comma));
  auto d2 = parse_slot(rest);
  if (!d1 || !d2) return std::nullopt;
  return PrinterState{*d1, *d2};
}

std::vector<PrinterState> all_states() {
  std::vector<PrinterState> out;
  for (Slot a : kSlots)
    for (Slot b : kSlots) out.push_back({a, b});
  return out;
}

PrinterState psi(Event c, const PrinterState& s) {
  switch (c) {
    case Event::AddA:
    case Event::AddB: {
      const Slot job = c == Event::AddA ? Slot::A : Slot::B;
      if (holds(s.d1, job) || holds(s.d2, job)) return s;
      if (is_free(s.d1)) return {job, s.d2};
      if (is_free(s.d2)) return {s.d1, job};
      return s;
    }
    case Event::Take: {
      auto deleted = [](Slot x) { return x == Slot::A ? Slot::ADeleted : Slot::BDeleted; };
      if (!is_free(s.d1)) return {deleted(s.d1), s.d2};
      if (!is_free(s.d2)) return {s.d1, deleted(s.d2)};
      return s;
    }
  }
  return s;
}

bool is_noop(Event c, const PrinterState& before) { return psi(c, before) == before; }

char family_of(Event c, const PrinterState& s) {
  switch (c) {
    case Event::Take:
      if (s.d1 == Slot::A) return 'A';
      if (s.d1 == Slot::B) return 'B';
      if (s.d2 == Slot::A) return 'C';
      if (s.d2 == Slot::B) return 'D';
      return 'E';
    case Event::AddA:
      if (s.d1 == Slot::A || s.d2 == Slot::A) return 'J';
      if (is_free(s.d1)) return 'F';
      if (is_free(s.d2)) return 'H';
      return 'L';
    case Event::AddB:
      if (s.d1 == Slot::B || s.d2 == Slot::B) return 'M';
      if (is_free(s.d1)) return 'G';
      if (is_free(s.d2)) return 'I';
      return 'K';
  }
  return '?';
}

std::vector<Predecessor> inv_psi(const PrinterState& s) {
  std::vector<Predecessor> out;
  for (Event c : kEvents)
    for (const PrinterState& before : all_states())
      if (psi(c, before) == s) out.push_back({c, before, family_of(c, before)});
  return out;
}

bool run_less(const Run& a, const Run& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  for (std::size_t i = 0; i < a.length(); ++i)
    if (a.steps[i].event != b.steps[i].event) return a.steps[i].event < b.steps[i].event;
  if (a.initial != b.initial) return a.initial < b.initial;
  return a.steps < b.steps;
}

bool is_consistent(const Run& r) {
  PrinterState s = r.initial;
  for (const Step& st : r.steps) {
    if (psi(st.event, s) != st.state) return false;
    s = st.state;
  }
  return true;
}

bool matches(const Property& p, const PrinterState& state, std::optional<Event> incoming) {
  if (p.is_any()) return true;
  const Value& v = p.value();
  if (v.is_set()) {
    for (const Atom& a : v.as_set().atoms)
      if (!parse_event(a.name)) throw ValidationError("'" + a.name + "' is not a printer event");
    return !incoming || v.as_set().contains(Atom{to_string(*incoming)});
  }
  if (v.is_atom()) {
    const std::string& name = v.as_atom().name;
    if (name.find(',') != std::string::npos) {
      auto want = parse_state(name);
      if (!want) throw ValidationError("'" + name + "' is not a printer state");
      return *want == state;
    }
    auto slot = parse_slot(name);
    if (!slot) throw ValidationError("'" + name + "' is not a printer state");
    return state.d1 == *slot && state.d2 == *slot;
  }
  throw ValidationError("observation property " + to_string(v) + " is neither a state nor an event set");
}

bool satisfies(const Run& run, const ObservationSequence& os, std::size_t cap) {
  const std::size_t positions = run.length() + 1;
  const std::size_t m = os.observations.size();
  auto state_at = [&](std::size_t p) { return p == 0 ? run.initial : run.steps[p - 1].state; };
  auto event_at = [&](std::size_t p) -> std::optional<Event> {
    if (p == 0) return std::nullopt;
    return run.steps[p - 1].event;
  };

  // ok[i][p]: the first i observations cover exactly positions [0, p).
  std::vector<std::vector<char>> ok(m + 1, std::vector<char>(positions + 1, 0));
  ok[0][0] = 1;
  for (std::size_t i = 0; i < m; ++i) {
    const Observation& o = os.observations[i];
    const std::size_t hi = o.opt ? o.min + *o.opt : std::max(cap, positions);
    for (std::size_t p = 0; p <= positions; ++p) {
      if (!ok[i][p]) continue;
      for (std::size_t t = 0; p + t <= positions && t <= hi; ++t) {
        if (t >= o.min) ok[i + 1][p + t] = 1;
        if (p + t == positions || !matches(o.property, state_at(p + t), event_at(p + t))) break;
      }
    }
  }
  return ok[m][positions] != 0;
}

namespace {

// Properties that may govern the first position of a run: the leading
// observations up to and including the first one with min > 0.
std::vector<const Observation*> boundary(const ObservationSequence& os, bool from_front) {
  std::vector<const Observation*> out;
  const auto& obs = os.observations;
  for (std::size_t k = 0; k < obs.size(); ++k) {
    const Observation& o = from_front ? obs[k] : obs[obs.size() - 1 - k];
    out.push_back(&o);
    if (o.min > 0) break;
  }
  return out;
}

class Search {
 public:
  Search(const EvidentialStatement& es, const ExplainOptions& opts, SearchStats& stats)
      : es_(es), opts_(opts), stats_(stats) {
    for (const PrinterState& s : all_states()) {
      initial_ok_[index_of(s)] = edge_ok(s, true);
      final_ok_[index_of(s)] = edge_ok(s, false);
    }
    reach_.assign(kSlots.size() * kSlots.size(), std::vector<signed char>(opts.max_len + 1, -1));
  }

  std::vector<Run> run() {
    for (const PrinterState& s : all_states()) {
      if (!final_ok_[index_of(s)] || !reach(s, opts_.max_len)) continue;
      dfs(s, opts_.max_len);
    }
    std::sort(found_.begin(), found_.end(), run_less);
    found_.erase(std::unique(found_.begin(), found_.end()), found_.end());
    return std::move(found_);
  }

 private:
  bool edge_ok(const PrinterState& s, bool front) const {
    for (const auto& os : es_.sequences) {
      bool any = false;
      for (const Observation* o : boundary(os, front))
        any = any || matches(o->property, s, std::nullopt);
      if (!any) return false;
    }
    return true;
  }

  bool skip(const Predecessor& p, const PrinterState& s) const { return !opts_.include_noops && p.state == s; }

  bool reach(const PrinterState& s, std::size_t remaining) {
    signed char& memo = reach_[index_of(s)][remaining];
    if (memo >= 0) return memo != 0;
    bool r = initial_ok_[index_of(s)];
    if (!r && remaining > 0) {
      for (const Predecessor& p : inv_psi(s)) {
        if (skip(p, s)) continue;
        if (reach(p.state, remaining - 1)) {
          r = true;
          break;
        }
      }
    }
    memo = r ? 1 : 0;
    return r;
  }

  void dfs(const PrinterState& s, std::size_t remaining) {
    ++stats_.states_visited;
    if (initial_ok_[index_of(s)]) {
      ++stats_.runs_enumerated;
      Run r{s, {trail_.rbegin(), trail_.rend()}};
      bool all = true;
      for (const auto& os : es_.sequences) {
        if (!satisfies(r, os, opts_.max_len)) {
          all = false;
          break;
        }
      }
      if (all) found_.push_back(std::move(r));
    }
    if (remaining == 0) return;
    for (const Predecessor& p : inv_psi(s)) {
      if (skip(p, s) || !reach(p.state, remaining - 1)) continue;
      trail_.push_back(Step{p.event, s});
      dfs(p.state, remaining - 1);
      trail_.pop_back();
    }
  }

  const EvidentialStatement& es_;
  const ExplainOptions& opts_;
  SearchStats& stats_;
  std::array<bool, 25> initial_ok_{};
  std::array<bool, 25> final_ok_{};
  std::vector<std::vector<signed char>> reach_;
  std::vector<Step> trail_;
  std::vector<Run> found_;
};

std::vector<Run> search(const EvidentialStatement& es, const ExplainOptions& opts, SearchStats& stats) {
  const ObservationSequence* printer = es.find("printer");
  if (!printer) throw ValidationError("evidential statement '" + es.name + "' has no 'printer' sequence");
  if (printer->observations.empty()) throw ValidationError("the 'printer' sequence has no final observation");
  return Search(es, opts, stats).run();
}

}  // namespace

std::vector<Run> explain(const EvidentialStatement& es, const ExplainOptions& opts, SearchStats* stats) {
  if (opts.max_len < 1) throw ValidationError("max_len must be at least 1");
  SearchStats local;
  return search(es, opts, stats ? *stats : local);
}

Verdict check_claim(const EvidentialStatement& es, const ExplainOptions& opts) {
  Verdict v;
  v.statement = es.name;
  v.explanations = search(es, opts, v.stats);
  v.verdict = !v.explanations.empty();
  return v;
}

std::vector<Run> oracle_enumerate(const PrinterState& initial, const std::function<bool(const PrinterState&)>& final_pred,
                                  std::size_t max_len) {
  std::vector<Run> out;
  std::vector<Step> steps;
  std::function<void(const PrinterState&)> go = [&](const PrinterState& s) {
    if (final_pred(s)) out.push_back(Run{initial, steps});
    if (steps.size() == max_len) return;
    for (Event c : kEvents) {
      const PrinterState next = psi(c, s);
      steps.push_back(Step{c, next});
      go(next);
      steps.pop_back();
    }
  };
  go(initial);
  std::sort(out.begin(), out.end(), run_less);
  return out;
}

}  // namespace flucid::recon
