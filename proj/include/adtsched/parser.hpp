#ifndef ADTSCHED_PARSER_HPP
#define ADTSCHED_PARSER_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adtsched/adt.hpp"

namespace adtsched {

struct SourceSpan {
    int line = 1;  // 1-based
    int col = 1;   // 1-based
};

enum class ParseErrorKind { Syntax, UnknownId, DuplicateId, ArityMismatch };

const char* parse_error_kind_name(ParseErrorKind k);

struct ParseError {
    SourceSpan span;
    ParseErrorKind kind = ParseErrorKind::Syntax;
    std::string message;
};

struct ParseResult {
    std::optional<Adt> adt;  // set only when errors is empty
    std::vector<ParseError> errors;
    bool ok() const { return errors.empty() && adt.has_value(); }
};

// Parses the line-oriented .adt format:
//   attack <id> [time=<int>] [cost=<int>]
//   defence <id> [time=<int>] [cost=<int>]
//   gate <id> = AND(<id>, <id>, ...) [time=<int>] [cost=<int>] [cond="..."]
//   root <id>
// '#' starts a comment. Collects as many errors as possible instead of
// stopping at the first one. A successful parse always validates cleanly.
ParseResult parse(std::string_view text);

// Inverse of parse for valid trees: parse(serialize(a)) is structurally
// equal to a.
std::string serialize(const Adt& adt);

}  // namespace adtsched

#endif
