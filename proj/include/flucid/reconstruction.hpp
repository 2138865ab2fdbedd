#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flucid/evidence.hpp"

namespace flucid::recon {

// Contents of one printer directory entry.
enum class Slot { Empty, A, B, ADeleted, BDeleted };
enum class Event { AddA, AddB, Take };

inline constexpr std::array<Slot, 5> kSlots = {Slot::Empty, Slot::A, Slot::B, Slot::ADeleted, Slot::BDeleted};
inline constexpr std::array<Event, 3> kEvents = {Event::AddA, Event::AddB, Event::Take};

struct PrinterState {
  Slot d1 = Slot::Empty;
  Slot d2 = Slot::Empty;

  friend auto operator<=>(const PrinterState&, const PrinterState&) = default;
};

// A free slot can take a new job: empty, A_deleted or B_deleted.
bool is_free(Slot s);

std::string to_string(Slot s);
std::string to_string(Event e);
// "d1,d2", e.g. "A,empty".
std::string to_string(const PrinterState& s);

std::optional<Slot> parse_slot(std::string_view text);
std::optional<Event> parse_event(std::string_view text);
// Accepts "x,y" (optionally with a space after the comma).
std::optional<PrinterState> parse_state(std::string_view text);

// All 25 states in (d1, d2) order.
std::vector<PrinterState> all_states();

// The manufacturer's transition function.
PrinterState psi(Event c, const PrinterState& s);

bool is_noop(Event c, const PrinterState& before);

struct Predecessor {
  Event event;
  PrinterState state;
  char family;  // 'A'..'M', the backtrace branch this pair belongs to

  friend bool operator==(const Predecessor&, const Predecessor&) = default;
};

// Branch letter for the step (c, before), 'A'..'M'.
char family_of(Event c, const PrinterState& before);

// Exact preimage {(c, s') : psi(c, s') = s}, ordered by event then state.
std::vector<Predecessor> inv_psi(const PrinterState& s);

struct Step {
  Event event;
  PrinterState state;  // state after the event

  friend auto operator<=>(const Step&, const Step&) = default;
};

struct Run {
  PrinterState initial;
  std::vector<Step> steps;

  std::size_t length() const { return steps.size(); }
  const PrinterState& final_state() const { return steps.empty() ? initial : steps.back().state; }

  friend bool operator==(const Run&, const Run&) = default;
};

// (length, events lexicographically, initial state, states)
bool run_less(const Run& a, const Run& b);

// Every step agrees with psi.
bool is_consistent(const Run& r);

// Whether a property holds at a run position. Atoms are state predicates
// ("x,y" exact, "x" both slots), property sets constrain the incoming
// event, and ANY always holds. Position 0 has no event, so sets hold there
// vacuously. Throws ValidationError for labels outside the printer model.
bool matches(const Property& p, const PrinterState& state, std::optional<Event> incoming);

// Whether the positions 0..n of `run` (0 is the initial state) can be cut
// into consecutive segments, one per observation of `os`, each of a length
// the observation allows and made of positions its property matches. An
// infinite opt is bounded by max(cap, positions).
bool satisfies(const Run& run, const ObservationSequence& os, std::size_t cap);

struct SearchStats {
  std::size_t states_visited = 0;
  std::size_t runs_enumerated = 0;
};

struct ExplainOptions {
  std::size_t max_len = 12;
  bool include_noops = false;
};

// Runs of at most max_len steps satisfying every sequence of `es`, found by
// backward search over inv_psi from the states allowed by the final
// observation of the `printer` sequence. Sorted by run_less. Runs with a
// no-op step are dropped unless include_noops is set.
// Throws ValidationError when max_len < 1 or `printer` is missing.
std::vector<Run> explain(const EvidentialStatement& es, const ExplainOptions& opts, SearchStats* stats = nullptr);

struct Verdict {
  std::string statement;
  bool verdict = false;
  std::vector<Run> explanations;
  SearchStats stats;
};

// explain() wrapped as a verdict; max_len = 0 is allowed here and admits
// only the zero-step run.
Verdict check_claim(const EvidentialStatement& es, const ExplainOptions& opts);

// Independent oracle: forward enumeration of every event sequence of at most
// max_len steps from `initial`, no-op steps included, kept when the final
// state satisfies `final_pred`. Sorted by run_less.
std::vector<Run> oracle_enumerate(const PrinterState& initial, const std::function<bool(const PrinterState&)>& final_pred,
                                  std::size_t max_len);

}  // namespace flucid::recon
