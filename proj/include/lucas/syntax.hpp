#pragma once

#include "lucas/term.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lucas {

/// Ungrammatical input: byte offset of the offending token and the set of
/// tokens that would have been accepted there.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Parses a complete term in the ascii syntax of docs/grammar.md.
Term parse_term(std::string_view text);

/// Parses the longest term starting at `pos` and advances `pos` past it.
/// Stops before any token that cannot continue the term, including the
/// reserved words of the program language.
Term parse_term_at(std::string_view text, std::size_t& pos);

enum class RenderStyle { Ascii, Unicode };

std::string render_term(const Term& t, RenderStyle style = RenderStyle::Ascii);

inline std::string to_ascii(const Term& t) { return render_term(t, RenderStyle::Ascii); }
inline std::string to_unicode(const Term& t) { return render_term(t, RenderStyle::Unicode); }

/// Words that end a term when embedded in program text.
bool is_program_keyword(std::string_view word);

}  // namespace lucas
