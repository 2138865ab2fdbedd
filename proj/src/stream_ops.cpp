#include "flucid/stream_ops.hpp"

#include <string>

#include "flucid/errors.hpp"

namespace flucid::ops {

namespace {

bool truth(const Value& v, std::string_view op) {
  if (!v.is_bool())
    throw TypeMismatch(std::string(op) + " expects a boolean condition stream, got " + v.type_name());
  return v.as_bool();
}

}  // namespace

Intension constant(Value v) {
  return [v = std::move(v)](const Context&) { return v; };
}

Intension from_stream(TagStream s) {
  return [s = std::move(s)](const Context& ctx) { return s.at(static_cast<std::size_t>(ctx.tag(s.dimension))); };
}

Value first(std::string_view d, const Intension& x, const Context& ctx) { return x(ctx.with(d, 0)); }

Value next(std::string_view d, const Intension& x, const Context& ctx) {
  return x(ctx.with(d, ctx.tag(d) + 1));
}

Value fby(std::string_view d, const Intension& x, const Intension& y, const Context& ctx) {
  const Tag t = ctx.tag(d);
  if (t == 0) return x(ctx);
  return y(ctx.with(d, t - 1));
}

Value pby(std::string_view d, const Intension& x, const Intension& y, const Context& ctx) {
  return fby(d, y, x, ctx);
}

Value iseod(std::string_view d, const Intension& x, const Context& ctx) {
  (void)d;
  return Value::boolean(x(ctx).is_eod());
}

Value wvr(std::string_view d, const Intension& x, const Intension& p, const Context& ctx, std::size_t limit) {
  const Tag want = ctx.tag(d);
  Tag seen = 0;
  for (std::size_t i = 0; i < limit; ++i) {
    const Context at = ctx.with(d, static_cast<Tag>(i));
    Value cond = p(at);
    if (cond.is_eod()) return Value::eod();
    if (truth(cond, "wvr")) {
      if (seen == want) return x(at);
      ++seen;
    }
  }
  throw UnboundedStream("wvr: no eod or qualifying element within " + std::to_string(limit) + " tags");
}

Value asa(std::string_view d, const Intension& x, const Intension& p, const Context& ctx, std::size_t limit) {
  return wvr(d, x, p, ctx.with(d, 0), limit);
}

Value upon(std::string_view d, const Intension& x, const Intension& p, const Context& ctx) {
  const Tag t = ctx.tag(d);
  Tag count = 0;
  for (Tag i = 0; i < t; ++i) {
    Value cond = p(ctx.with(d, i));
    if (cond.is_eod()) return Value::eod();
    if (truth(cond, "upon")) ++count;
  }
  return x(ctx.with(d, count));
}

Value last(std::string_view d, const Intension& x, const Context& ctx, std::size_t limit) {
  for (std::size_t i = 0; i < limit; ++i) {
    if (x(ctx.with(d, static_cast<Tag>(i))).is_eod()) {
      if (i == 0) return Value::eod();
      return x(ctx.with(d, static_cast<Tag>(i - 1)));
    }
  }
  throw UnboundedStream("last: no eod along '" + std::string(d) + "' within " + std::to_string(limit) + " tags");
}

Value prev(std::string_view d, const Intension& x, const Context& ctx) {
  const Tag t = ctx.tag(d);
  if (t == 0) return Value::eod();
  return x(ctx.with(d, t - 1));
}

TagStream materialize(const Intension& x, std::string_view d, const Context& ctx, std::size_t limit) {
  TagStream out{std::string(d), {}, true};
  for (std::size_t i = 0; i < limit; ++i) {
    Value v = x(ctx.with(d, static_cast<Tag>(i)));
    if (v.is_eod()) return out;
    out.elements.push_back(std::move(v));
  }
  out.bounded = false;
  return out;
}

}  // namespace flucid::ops
