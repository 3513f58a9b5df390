#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "needsem/term.hpp"

namespace needsem {

struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

struct ParseError {
  SourceSpan span;
  std::string message;
  std::vector<std::string> expected;

  /// "offset START-END: MESSAGE (expected A, B)".
  std::string describe() const;
};

class ParseFailure : public std::runtime_error {
 public:
  explicit ParseFailure(ParseError e) : std::runtime_error(e.describe()), error(std::move(e)) {}
  ParseError error;
};

/// Concrete syntax:
///   \x. M      let x = M in N      letrec x1 = M1, ..., xn = Mn in N
///   M N        #      <M, N>       M.1  M.2      (M)      -- comment
std::variant<Term, ParseError> try_parse(std::string_view text, Mode mode);
/// As try_parse, throwing ParseFailure.
Term parse(std::string_view text, Mode mode);

/// Minimal-parenthesis printing; parse(print(t)) == t.
std::string print(const Term& t);
std::string print_bindings(const std::vector<Binding>& bindings);

bool is_keyword(std::string_view name);
bool is_identifier(std::string_view name);

/// Engine-neutral view of a run, serialized by encode_trace.
struct TraceView {
  std::string mode;
  std::string engine;
  std::vector<std::pair<std::string, Term>> steps;  // rule label, resulting term
  std::string outcome;
  std::optional<std::vector<Binding>> heap;
  std::optional<Term> value;
  std::optional<Term> term;
  std::string detail;
};

std::string encode_trace(const TraceView& view);

}  // namespace needsem
