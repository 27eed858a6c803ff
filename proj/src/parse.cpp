#include "lorenz_dcx/parse.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace ldcx {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

[[noreturn]] void malformed(std::string_view key, std::string_view raw, const std::string& what) {
  throw ParseError(std::string(key), std::string(raw), what);
}

// Unsigned-or-signed decimal, the whole view must be consumed.
std::optional<double> to_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty() || !(std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == '.')) {
    return std::nullopt;
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return negative ? -value : value;
}

}  // namespace

double parse_real(std::string_view text, std::string_view key) {
  const auto raw = trim(text);
  if (const auto slash = raw.find('/'); slash != std::string_view::npos) {
    const auto num = to_double(raw.substr(0, slash));
    const auto den = to_double(raw.substr(slash + 1));
    if (!num || !den) malformed(key, raw, "malformed rational literal");
    if (*den == 0.0) malformed(key, raw, "zero denominator");
    return *num / *den;
  }
  const auto v = to_double(raw);
  if (!v) malformed(key, raw, "malformed real literal");
  return *v;
}

Complexd parse_complex(std::string_view text, std::string_view key) {
  const auto raw = trim(text);
  if (raw.empty()) malformed(key, raw, "empty value");
  if (raw.back() != 'i') {
    return {parse_real(raw, key), 0.0};
  }
  const auto body = raw.substr(0, raw.size() - 1);
  // The sign separating the parts is the last '+'/'-' that is neither leading
  // nor part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const auto imag_of = [&](std::string_view s) -> double {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    if (s.front() != '+' && s.front() != '-' && split != std::string_view::npos) {
      malformed(key, raw, "imaginary part needs an explicit sign");
    }
    const auto v = to_double(s);
    if (!v) malformed(key, raw, "malformed complex literal");
    return *v;
  };
  if (split == std::string_view::npos) {
    return {0.0, imag_of(body)};
  }
  const auto re = to_double(body.substr(0, split));
  if (!re) malformed(key, raw, "malformed complex literal");
  return {*re, imag_of(body.substr(split))};
}

State3d parse_state(std::string_view text, std::string_view key) {
  auto raw = trim(text);
  if (raw.size() < 2 || raw.front() != '(' || raw.back() != ')') {
    malformed(key, raw, "state must be written (x, y, z)");
  }
  auto inner = raw.substr(1, raw.size() - 2);
  State3d s;
  for (int i = 0; i < 3; ++i) {
    const auto comma = inner.find(',');
    if ((i < 2) != (comma != std::string_view::npos)) {
      malformed(key, raw, "state must have exactly three components");
    }
    s[i] = parse_complex(inner.substr(0, comma), key);
    inner = comma == std::string_view::npos ? std::string_view{} : inner.substr(comma + 1);
  }
  return s;
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_complex(const Complexd& value) {
  auto out = format_real(value.real());
  if (value.imag() == 0.0 && !std::signbit(value.imag())) return out;
  const auto im = format_real(value.imag());
  if (im.front() != '-') out += '+';
  return out + im + 'i';
}

std::string format_state(const State3d& s) {
  return "(" + format_complex(s[0]) + ", " + format_complex(s[1]) + ", " + format_complex(s[2]) +
         ")";
}

void KeyValues::set(std::string key, std::string value, int line) {
  if (contains(key)) throw ParseError(key, value, "duplicate key");
  entries_.push_back({std::move(key), std::move(value), line});
}

std::optional<std::string_view> KeyValues::find(std::string_view key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return std::string_view(e.value);
  }
  return std::nullopt;
}

std::string_view KeyValues::require(std::string_view key) const {
  if (const auto v = find(key)) return *v;
  throw ParseError(std::string(key), "", "missing key");
}

int KeyValues::line_of(std::string_view key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return e.line;
  }
  return 0;
}

namespace {

void add_entry(KeyValues& kv, std::string_view item, int line) {
  item = trim(item);
  if (item.empty()) return;
  const auto eq = item.find('=');
  if (eq == std::string_view::npos) throw ParseError("", std::string(item), "expected key=value");
  const auto key = trim(item.substr(0, eq));
  if (key.empty()) throw ParseError("", std::string(item), "empty key");
  kv.set(std::string(key), std::string(trim(item.substr(eq + 1))), line);
}

}  // namespace

KeyValues parse_key_values(std::string_view doc) {
  KeyValues kv;
  int depth = 0;
  int line = 1;
  int item_line = 1;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= doc.size(); ++i) {
    const char c = i < doc.size() ? doc[i] : '\n';
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == ',' && depth == 0) || c == '\n') {
      add_entry(kv, doc.substr(start, i - start), item_line);
      start = i + 1;
      if (c == '\n') ++line;
      item_line = line;
    }
  }
  return kv;
}

std::vector<KeyValues> parse_stanzas(std::string_view text) {
  std::vector<KeyValues> stanzas;
  KeyValues current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) {
      if (!current.empty()) stanzas.push_back(std::move(current));
      current = KeyValues{};
    } else if (t.front() != '#') {
      add_entry(current, t, line_no);
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (!current.empty()) stanzas.push_back(std::move(current));
  return stanzas;
}

SystemParamsd params_from(const KeyValues& kv) {
  SystemParamsd p;
  p.a = parse_complex(kv.require("a"), "a");
  p.b = parse_complex(kv.require("b"), "b");
  p.r = parse_complex(kv.require("r"), "r");
  const auto dt_raw = kv.require("dt");
  p.dt = parse_real(dt_raw, "dt");
  if (!(p.dt > 0)) throw ParseError("dt", std::string(dt_raw), "dt must be positive");
  return p;
}

SystemParamsd parse_params(std::string_view doc) { return params_from(parse_key_values(doc)); }

std::string format_params(const SystemParamsd& p) {
  return "a=" + format_complex(p.a) + ", b=" + format_complex(p.b) + ", r=" + format_complex(p.r) +
         ", dt=" + format_real(p.dt);
}

RealSystemParamsd restrict_to_real(const SystemParamsd& p) {
  const auto check = [](const char* key, const Complexd& z) {
    if (z.imag() != 0.0) {
      throw ParseError(key, format_complex(z), "real restriction requires a zero imaginary part");
    }
    return z.real();
  };
  return {check("a", p.a), check("b", p.b), check("r", p.r), p.dt};
}

}  // namespace ldcx
