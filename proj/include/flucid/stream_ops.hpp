#pragma once

#include <cstddef>
#include <functional>
#include <string_view>

#include "flucid/context.hpp"
#include "flucid/value.hpp"

// Intensional stream operators, each defined through context switching (@)
// and context querying (#) on an Intension: a value that varies over contexts.
namespace flucid::ops {

using Intension = std::function<Value(const Context&)>;

inline constexpr std::size_t kDefaultScanLimit = 10000;

Intension constant(Value v);

// Reads the stream's element at the tag of `s.dimension`.
Intension from_stream(TagStream s);

// X @ {d:0}
Value first(std::string_view d, const Intension& x, const Context& ctx);
// X @ {d:#d+1}
Value next(std::string_view d, const Intension& x, const Context& ctx);
// X at #d = 0, Y @ {d:#d-1} afterwards
Value fby(std::string_view d, const Intension& x, const Intension& y, const Context& ctx);
// Y fby X: the new element Y precedes the existing stream X.
Value pby(std::string_view d, const Intension& x, const Intension& y, const Context& ctx);
Value iseod(std::string_view d, const Intension& x, const Context& ctx);

// X at the tag of the (#d+1)-th true element of P.
Value wvr(std::string_view d, const Intension& x, const Intension& p, const Context& ctx,
          std::size_t limit = kDefaultScanLimit);
// first(X wvr P)
Value asa(std::string_view d, const Intension& x, const Intension& p, const Context& ctx,
          std::size_t limit = kDefaultScanLimit);
// X at the number of true elements of P strictly before #d.
Value upon(std::string_view d, const Intension& x, const Intension& p, const Context& ctx);

// X @ {d:L-1} where L is the index of the first eod; UnboundedStream if none within `limit`.
Value last(std::string_view d, const Intension& x, const Context& ctx, std::size_t limit = kDefaultScanLimit);
// X @ {d:#d-1}; eod at the origin.
Value prev(std::string_view d, const Intension& x, const Context& ctx);

// Samples X along d from tag 0 until the first eod. The result is marked
// unbounded when `limit` elements are read without meeting one.
TagStream materialize(const Intension& x, std::string_view d, const Context& ctx = {},
                      std::size_t limit = kDefaultScanLimit);

}  // namespace flucid::ops
