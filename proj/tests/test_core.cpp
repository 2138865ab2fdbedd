#include <doctest.h>

#include <random>

#include "flucid/context.hpp"
#include "flucid/errors.hpp"
#include "flucid/evidence.hpp"

using namespace flucid;

TEST_CASE("context_override binds one dimension and leaves the rest") {
  CHECK(context_override(Context{{"d", 0}}, "d", 5) == Context{{"d", 5}});
  CHECK(context_override(Context{}, "obs", 2) == Context{{"obs", 2}});
  CHECK(context_override(Context{{"place", 1}, {"time", 3}}, "time", 4) == Context{{"place", 1}, {"time", 4}});

  const Context c{{"d", 1}};
  const Context c2 = context_override(c, "d", 9);
  CHECK(c.tag("d") == 1);
  CHECK(c2.tag("d") == 9);
}

TEST_CASE("negative tags are rejected") {
  CHECK_THROWS_AS(context_override(Context{}, "d", -1), ValidationError);
  CHECK_THROWS_AS((Context{{"d", -3}}), ValidationError);
}

TEST_CASE("context_query reads a tag or names the missing dimension") {
  CHECK(context_query(Context{{"d", 7}}, "d") == 7);
  CHECK(context_query(Context{{"obs", 2}}, "obs") == 2);
  try {
    (void)context_query(Context{{"d", 7}}, "e");
    FAIL("expected UnboundDimension");
  } catch (const UnboundDimension& e) {
    CHECK(e.dimension() == "e");
  }
}

TEST_CASE("override and query laws over random contexts") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<Tag> tag(0, 50);
  const std::vector<std::string> dims = {"d", "e", "obs", "place", "time"};
  std::uniform_int_distribution<std::size_t> pick(0, dims.size() - 1);
  for (int i = 0; i < 1000; ++i) {
    Context c;
    for (int k = 0; k < 3; ++k) c = c.with(dims[pick(rng)], tag(rng));
    const std::string d = dims[pick(rng)];
    const Tag t1 = tag(rng), t2 = tag(rng);
    CHECK(context_query(context_override(c, d, t1), d) == t1);
    CHECK(context_override(context_override(c, d, t1), d, t2) == context_override(c, d, t2));
  }
}

TEST_CASE("values compare structurally") {
  CHECK(Value::atom("B_deleted") == Value::atom("B_deleted"));
  CHECK(Value::atom("A") != Value::atom("B"));
  CHECK(Value::integer(1) != Value::boolean(true));
  CHECK(Value::set({"take", "add_B", "take"}).as_set().atoms.size() == 2);
  CHECK(Value::set({"add_B", "take"}) == Value::set({"take", "add_B"}));
  CHECK(Value::array({Value::atom("a"), Value::eod()}) == Value::array({Value::atom("a"), Value::eod()}));
}

TEST_CASE("tag streams cut at the first eod") {
  TagStream s = TagStream::of("d", {Value::atom("a"), Value::atom("b"), Value::eod(), Value::atom("c")});
  CHECK(s.length() == 2);
  CHECK(s.at(1) == Value::atom("b"));
  CHECK(s.at(2).is_eod());
  CHECK(s.at(7).is_eod());

  TagStream u{"d", {Value::integer(1)}, false};
  CHECK_THROWS_AS(u.at(3), UnboundedStream);
}

TEST_CASE("observation wildcard is (ANY, 0, +inf)") {
  Observation w = Observation::wildcard();
  CHECK(w.property.is_any());
  CHECK(w.min == 0);
  CHECK_FALSE(w.opt.has_value());
  CHECK(w.is_wildcard());
  CHECK_THROWS_AS(Property::of(Value::integer(3)), ValidationError);
}

TEST_CASE("evidential statements ignore sequence order, sequences do not") {
  ObservationSequence p{"printer", {Observation::wildcard(), {Property::of(Value::atom("B_deleted")), 1, 0}}};
  ObservationSequence m{"manuf", {{Property::of(Value::atom("empty")), 1, 0}, Observation::wildcard()}};
  CHECK(EvidentialStatement{"es", {p, m}} == EvidentialStatement{"es", {m, p}});
  CHECK_FALSE(EvidentialStatement{"es", {p, m}} == EvidentialStatement{"es", {p}});

  ObservationSequence reversed{"printer", {p.observations[1], p.observations[0]}};
  CHECK_FALSE(p == reversed);
}
