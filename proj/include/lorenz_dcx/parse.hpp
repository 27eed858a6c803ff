#pragma once

// Literal grammar and key=value documents shared by the CLI and scenario files.
//
//   real     := decimal | decimal "/" decimal
//   complex  := decimal | [sign] [decimal] "i" | decimal sign [decimal] "i"
//   state    := "(" complex "," complex "," complex ")"
//
// Examples: "10", "8/3", "4+9i", "0-4i", "-1-5i", "i", "2.5e-3".

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lorenz_dcx/types.hpp"

namespace ldcx {

double parse_real(std::string_view text, std::string_view key = {});
Complexd parse_complex(std::string_view text, std::string_view key = {});
State3d parse_state(std::string_view text, std::string_view key = {});

/// Shortest form that re-parses to the identical bits (17 significant digits).
std::string format_real(double value);
std::string format_complex(const Complexd& value);
std::string format_state(const State3d& s);

/// Ordered key/value pairs; later duplicates are rejected at parse time.
class KeyValues {
 public:
  void set(std::string key, std::string value, int line = 0);
  std::optional<std::string_view> find(std::string_view key) const;
  std::string_view require(std::string_view key) const;
  bool contains(std::string_view key) const { return find(key).has_value(); }
  int line_of(std::string_view key) const;
  int first_line() const { return entries_.empty() ? 0 : entries_.front().line; }
  const auto& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  struct Entry {
    std::string key;
    std::string value;
    int line;
  };
  std::vector<Entry> entries_;
};

/// Parses "a=10, b=8/3, r=5, dt=0.005": entries separated by commas or
/// newlines outside parentheses.
KeyValues parse_key_values(std::string_view doc);

/// Scenario files: one stanza per block of key=value lines, blocks separated
/// by blank lines, '#' starts a comment line.
std::vector<KeyValues> parse_stanzas(std::string_view text);

SystemParamsd params_from(const KeyValues& kv);
SystemParamsd parse_params(std::string_view doc);
std::string format_params(const SystemParamsd& p);

/// Real restriction of params; throws ParseError if any imaginary part is nonzero.
RealSystemParamsd restrict_to_real(const SystemParamsd& p);

}  // namespace ldcx
