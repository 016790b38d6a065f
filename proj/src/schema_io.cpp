#include "gsub/schema_io.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <vector>

#include "gsub/error.hpp"

namespace gsub {

namespace {

// ---------------------------------------------------------------------------
// shared machinery

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  size_t line = 1;
  size_t col = 1;

  explicit Cursor(const std::string& t) : text(t) {}

  bool at_end() const { return pos >= text.size(); }
  char peek() const { return at_end() ? '\0' : text[pos]; }

  void advance() {
    if (at_end()) return;
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  bool starts_with(std::string_view s) const {
    return text.compare(pos, s.size(), s) == 0;
  }

  struct Mark {
    size_t pos, line, col;
  };
  Mark mark() const { return {pos, line, col}; }
  void rewind(const Mark& m) {
    pos = m.pos;
    line = m.line;
    col = m.col;
  }
};

[[noreturn]] void syntax_fail(const Cursor& cur, const std::string& expected) {
  throw Error("syntax-error", "line " + std::to_string(cur.line) + ", column " +
                                  std::to_string(cur.col) + ": expected " +
                                  expected);
}

[[noreturn]] void syntax_fail_msg(const Cursor& cur, const std::string& what) {
  throw Error("syntax-error", "line " + std::to_string(cur.line) + ", column " +
                                  std::to_string(cur.col) + ": " + what);
}

void expect_str(Cursor& cur, std::string_view s, const std::string& shown) {
  if (!cur.starts_with(s)) syntax_fail(cur, shown);
  for (size_t i = 0; i < s.size(); ++i) cur.advance();
}

void expect_char(Cursor& cur, char c, const std::string& shown) {
  if (cur.peek() != c || cur.at_end()) syntax_fail(cur, shown);
  cur.advance();
}

// Scans a bare token: bytes up to any stop character, newline, or end of
// input. The cursor is left on the terminator.
std::string scan_until(Cursor& cur, std::string_view stops) {
  std::string out;
  while (!cur.at_end()) {
    char c = cur.peek();
    if (c == '\n' || stops.find(c) != std::string_view::npos) break;
    out.push_back(c);
    cur.advance();
  }
  return out;
}

std::vector<const Entity*> sorted_entities(const GraphState& g) {
  std::vector<const Entity*> out;
  out.reserve(g.entities.size());
  for (const auto& e : g.entities) out.push_back(&e);
  std::sort(out.begin(), out.end(),
            [](const Entity* a, const Entity* b) { return a->id < b->id; });
  return out;
}

std::vector<const Relation*> sorted_relations(const GraphState& g) {
  std::vector<const Relation*> out;
  out.reserve(g.relations.size());
  for (const auto& r : g.relations) out.push_back(&r);
  std::sort(out.begin(), out.end(), [](const Relation* a, const Relation* b) {
    if (a->subject != b->subject) return a->subject < b->subject;
    if (a->predicate != b->predicate) return a->predicate < b->predicate;
    return a->object < b->object;
  });
  return out;
}

bool is_forbidden_control(unsigned char c) {
  return c < 0x20 && c != '\t' && c != '\n' && c != '\r';
}

// ---------------------------------------------------------------------------
// unified-text

bool ut_needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  if (s == "[entities]" || s == "[relations]") return true;
  char first = s.front();
  char last = s.back();
  if (first == ' ' || first == '\t' || last == ' ' || last == '\t') return true;
  return s.find_first_of("(),:\"\\{}=\n\r\t") != std::string::npos;
}

void ut_append_token(std::string& out, const std::string& s) {
  for (unsigned char c : s) {
    if (is_forbidden_control(c)) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "0x%02x", c);
      throw Error("unrepresentable-label",
                  std::string("unified-text has no escape for byte ") + buf);
    }
  }
  if (!ut_needs_quotes(s)) {
    out += s;
    return;
  }
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
}

void ut_append_attrs(std::string& out, const AttrMap& attrs) {
  if (attrs.empty()) return;
  out += " {";
  bool first = true;
  for (const auto& [k, v] : attrs) {
    if (!first) out += ", ";
    first = false;
    ut_append_token(out, k);
    out.push_back('=');
    ut_append_token(out, v);
  }
  out.push_back('}');
}

std::string serialize_unified(const GraphState& g) {
  std::string out = "[entities]\n";
  for (const Entity* e : sorted_entities(g)) {
    ut_append_token(out, e->id);
    if (e->label) {
      out += ": ";
      ut_append_token(out, *e->label);
    }
    ut_append_attrs(out, e->attrs);
    out.push_back('\n');
  }
  out += "[relations]\n";
  for (const Relation* r : sorted_relations(g)) {
    out.push_back('(');
    ut_append_token(out, r->subject);
    out += ", ";
    ut_append_token(out, r->predicate);
    out += ", ";
    ut_append_token(out, r->object);
    out.push_back(')');
    ut_append_attrs(out, r->attrs);
    out.push_back('\n');
  }
  return out;
}

// Parses a double-quoted token. The cursor sits on the opening quote.
// `allow_hex` admits the \x{NN} escape used by the natural-language form.
std::string parse_quoted(Cursor& cur, bool allow_hex) {
  expect_char(cur, '"', "'\"'");
  std::string out;
  for (;;) {
    if (cur.at_end() || cur.peek() == '\n') syntax_fail(cur, "closing '\"'");
    char c = cur.peek();
    cur.advance();
    if (c == '"') return out;
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (cur.at_end()) syntax_fail(cur, "escape character");
    char e = cur.peek();
    cur.advance();
    switch (e) {
      case '\\': out.push_back('\\'); break;
      case '"': out.push_back('"'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 't': out.push_back('\t'); break;
      case 'x': {
        if (!allow_hex) syntax_fail_msg(cur, "unsupported escape '\\x'");
        expect_char(cur, '{', "'{' after \\x");
        unsigned value = 0;
        int digits = 0;
        while (digits < 2 && std::isxdigit(static_cast<unsigned char>(cur.peek()))) {
          char h = cur.peek();
          cur.advance();
          value = value * 16 +
                  static_cast<unsigned>(h <= '9' ? h - '0'
                                                 : (h | 0x20) - 'a' + 10);
          ++digits;
        }
        if (digits == 0) syntax_fail(cur, "hex digits in \\x{..}");
        expect_char(cur, '}', "'}' after \\x{..");
        out.push_back(static_cast<char>(value));
        break;
      }
      default:
        syntax_fail_msg(cur, std::string("unsupported escape '\\") + e + "'");
    }
  }
}

void check_duplicate_attr(const AttrMap& attrs, const std::string& key) {
  if (attrs.count(key))
    throw Error("semantic-error", "duplicate attribute key " + key);
}

// attrs block body after "{": k=v pairs separated by ", ", closed by "}".
AttrMap ut_parse_attrs(Cursor& cur) {
  AttrMap attrs;
  for (;;) {
    std::string key = cur.peek() == '"' ? parse_quoted(cur, false)
                                        : scan_until(cur, "=,}");
    expect_char(cur, '=', "'='");
    std::string value = cur.peek() == '"' ? parse_quoted(cur, false)
                                          : scan_until(cur, ",}");
    check_duplicate_attr(attrs, key);
    attrs.emplace(key, value);
    if (cur.peek() == '}') {
      cur.advance();
      return attrs;
    }
    expect_str(cur, ", ", "', ' or '}'");
  }
}

// Bare tokens that run into " {" (attrs) or similar separators carry the
// separating space at the end; callers strip it via this helper.
std::string strip_separator_space(Cursor& cur, std::string tok) {
  if (tok.empty() || tok.back() != ' ')
    syntax_fail(cur, "' ' before '{'");
  tok.pop_back();
  return tok;
}

void ut_parse_entity_line(Cursor& cur, GraphState& g) {
  Entity e;
  bool quoted = cur.peek() == '"';
  if (quoted) {
    e.id = parse_quoted(cur, false);
  } else {
    e.id = scan_until(cur, ":{");
    if (cur.peek() == '{') e.id = strip_separator_space(cur, e.id);
  }
  if (cur.peek() == ':') {
    expect_str(cur, ": ", "': '");
    if (cur.peek() == '"') {
      e.label = parse_quoted(cur, false);
      if (cur.peek() == ' ') {
        cur.advance();
        expect_char(cur, '{', "'{'");
        e.attrs = ut_parse_attrs(cur);
      }
    } else {
      std::string label = scan_until(cur, "{");
      if (cur.peek() == '{') {
        label = strip_separator_space(cur, label);
        cur.advance();
        e.attrs = ut_parse_attrs(cur);
      }
      e.label = label;
    }
  } else if (quoted && cur.peek() == ' ') {
    cur.advance();
    expect_char(cur, '{', "'{'");
    e.attrs = ut_parse_attrs(cur);
  } else if (!quoted && cur.peek() == '{') {
    cur.advance();
    e.attrs = ut_parse_attrs(cur);
  }
  expect_char(cur, '\n', "newline");
  g.entities.push_back(std::move(e));
}

std::string ut_parse_relation_token(Cursor& cur, std::string_view stops) {
  if (cur.peek() == '"') return parse_quoted(cur, false);
  return scan_until(cur, stops);
}

void ut_parse_relation_line(Cursor& cur, GraphState& g) {
  Relation r;
  expect_char(cur, '(', "'('");
  r.subject = ut_parse_relation_token(cur, ",)");
  expect_str(cur, ", ", "', '");
  r.predicate = ut_parse_relation_token(cur, ",");
  expect_str(cur, ", ", "', '");
  r.object = ut_parse_relation_token(cur, ",)");
  expect_char(cur, ')', "')'");
  if (cur.peek() == ' ') {
    cur.advance();
    expect_char(cur, '{', "'{'");
    r.attrs = ut_parse_attrs(cur);
  }
  expect_char(cur, '\n', "newline");
  g.relations.push_back(std::move(r));
}

GraphState parse_unified(const std::string& text) {
  Cursor cur(text);
  GraphState g;
  expect_str(cur, "[entities]\n", "'[entities]'");
  while (!cur.starts_with("[relations]\n")) {
    if (cur.at_end()) syntax_fail(cur, "'[relations]'");
    ut_parse_entity_line(cur, g);
  }
  expect_str(cur, "[relations]\n", "'[relations]'");
  while (!cur.at_end()) ut_parse_relation_line(cur, g);
  return g;
}

// ---------------------------------------------------------------------------
// xml-style

void xml_append_escaped(std::string& out, const std::string& s) {
  for (unsigned char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default:
        if (c < 0x20) {
          char buf[16];
          std::snprintf(buf, sizeof buf, "&#x%x;", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
}

void xml_append_attr_children(std::string& out, const AttrMap& attrs,
                              const char* parent) {
  if (attrs.empty()) {
    out += "/>";
    return;
  }
  out.push_back('>');
  for (const auto& [k, v] : attrs) {
    out += "<attr key=\"";
    xml_append_escaped(out, k);
    out += "\" value=\"";
    xml_append_escaped(out, v);
    out += "\"/>";
  }
  out += "</";
  out += parent;
  out.push_back('>');
}

std::string serialize_xml(const GraphState& g) {
  std::string out = "<graph>";
  for (const Entity* e : sorted_entities(g)) {
    out += "<entity id=\"";
    xml_append_escaped(out, e->id);
    out.push_back('"');
    if (e->label) {
      out += " label=\"";
      xml_append_escaped(out, *e->label);
      out.push_back('"');
    }
    xml_append_attr_children(out, e->attrs, "entity");
  }
  for (const Relation* r : sorted_relations(g)) {
    out += "<relation subject=\"";
    xml_append_escaped(out, r->subject);
    out += "\" predicate=\"";
    xml_append_escaped(out, r->predicate);
    out += "\" object=\"";
    xml_append_escaped(out, r->object);
    out.push_back('"');
    xml_append_attr_children(out, r->attrs, "relation");
  }
  out += "</graph>";
  return out;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

void xml_parse_reference(Cursor& cur, std::string& out) {
  expect_char(cur, '&', "'&'");
  static const struct { const char* name; char ch; } kNamed[] = {
      {"amp;", '&'}, {"lt;", '<'}, {"gt;", '>'}, {"quot;", '"'}, {"apos;", '\''},
  };
  for (const auto& n : kNamed) {
    if (cur.starts_with(n.name)) {
      expect_str(cur, n.name, n.name);
      out.push_back(n.ch);
      return;
    }
  }
  if (cur.peek() != '#') syntax_fail_msg(cur, "invalid character reference");
  cur.advance();
  unsigned long cp = 0;
  int digits = 0;
  if (cur.peek() == 'x' || cur.peek() == 'X') {
    cur.advance();
    while (std::isxdigit(static_cast<unsigned char>(cur.peek()))) {
      char h = cur.peek();
      cur.advance();
      cp = cp * 16 + static_cast<unsigned long>(
                         h <= '9' ? h - '0' : (h | 0x20) - 'a' + 10);
      ++digits;
      if (cp > 0x10FFFF) syntax_fail_msg(cur, "character reference out of range");
    }
  } else {
    while (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
      cp = cp * 10 + static_cast<unsigned long>(cur.peek() - '0');
      cur.advance();
      ++digits;
      if (cp > 0x10FFFF) syntax_fail_msg(cur, "character reference out of range");
    }
  }
  if (digits == 0) syntax_fail(cur, "digits in character reference");
  expect_char(cur, ';', "';'");
  append_utf8(out, cp);
}

void xml_skip_ws(Cursor& cur) {
  while (!cur.at_end()) {
    char c = cur.peek();
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') return;
    cur.advance();
  }
}

std::string xml_read_name(Cursor& cur) {
  std::string name;
  while (std::isalpha(static_cast<unsigned char>(cur.peek())))
    name.push_back(cur.text[cur.pos]), cur.advance();
  if (name.empty()) syntax_fail(cur, "element or attribute name");
  return name;
}

struct XmlTag {
  std::map<std::string, std::string> attributes;
  bool self_closed = false;
};

// Parses the remainder of a start tag after its name: attributes and the
// closing ">" or "/>".
XmlTag xml_parse_tag(Cursor& cur) {
  XmlTag tag;
  for (;;) {
    bool had_ws = false;
    while (cur.peek() == ' ' || cur.peek() == '\t' || cur.peek() == '\n' ||
           cur.peek() == '\r') {
      cur.advance();
      had_ws = true;
    }
    if (cur.peek() == '>') {
      cur.advance();
      return tag;
    }
    if (cur.peek() == '/') {
      cur.advance();
      expect_char(cur, '>', "'>'");
      tag.self_closed = true;
      return tag;
    }
    if (!had_ws) syntax_fail(cur, "whitespace before attribute");
    std::string name = xml_read_name(cur);
    expect_char(cur, '=', "'='");
    char quote = cur.peek();
    if (quote != '"' && quote != '\'') syntax_fail(cur, "'\"'");
    cur.advance();
    std::string value;
    for (;;) {
      if (cur.at_end()) syntax_fail(cur, "closing quote");
      char c = cur.peek();
      if (c == quote) {
        cur.advance();
        break;
      }
      if (c == '<') syntax_fail_msg(cur, "unescaped '<' in attribute value");
      if (c == '&') {
        xml_parse_reference(cur, value);
        continue;
      }
      value.push_back(c);
      cur.advance();
    }
    if (tag.attributes.count(name))
      syntax_fail_msg(cur, "duplicate attribute '" + name + "'");
    tag.attributes.emplace(std::move(name), std::move(value));
  }
}

std::string xml_take_required(Cursor& cur, XmlTag& tag, const char* element,
                              const char* name) {
  auto it = tag.attributes.find(name);
  if (it == tag.attributes.end())
    syntax_fail_msg(cur, std::string("missing attribute '") + name + "' on <" +
                             element + ">");
  std::string value = std::move(it->second);
  tag.attributes.erase(it);
  return value;
}

void xml_reject_leftover(Cursor& cur, const XmlTag& tag, const char* element) {
  if (!tag.attributes.empty())
    syntax_fail_msg(cur, "unexpected attribute '" +
                             tag.attributes.begin()->first + "' on <" +
                             element + ">");
}

// <attr .../> children up to the parent's close tag.
AttrMap xml_parse_attr_children(Cursor& cur, const std::string& parent) {
  AttrMap attrs;
  for (;;) {
    xml_skip_ws(cur);
    if (cur.at_end()) syntax_fail(cur, "'</" + parent + ">'");
    if (cur.peek() != '<') syntax_fail_msg(cur, "unexpected text content");
    cur.advance();
    if (cur.peek() == '/') {
      cur.advance();
      expect_str(cur, parent + ">", "'" + parent + ">'");
      return attrs;
    }
    std::string name = xml_read_name(cur);
    if (name != "attr")
      syntax_fail_msg(cur, "unexpected element '" + name + "'");
    XmlTag tag = xml_parse_tag(cur);
    if (!tag.self_closed) syntax_fail(cur, "'/>' on <attr>");
    std::string key = xml_take_required(cur, tag, "attr", "key");
    std::string value = xml_take_required(cur, tag, "attr", "value");
    xml_reject_leftover(cur, tag, "attr");
    check_duplicate_attr(attrs, key);
    attrs.emplace(std::move(key), std::move(value));
  }
}

GraphState parse_xml(const std::string& text) {
  Cursor cur(text);
  GraphState g;
  xml_skip_ws(cur);
  expect_str(cur, "<graph", "'<graph>'");
  XmlTag root = xml_parse_tag(cur);
  xml_reject_leftover(cur, root, "graph");
  bool saw_relation = false;
  if (!root.self_closed) {
    for (;;) {
      xml_skip_ws(cur);
      if (cur.at_end()) syntax_fail(cur, "'</graph>'");
      if (cur.peek() != '<') syntax_fail_msg(cur, "unexpected text content");
      cur.advance();
      if (cur.peek() == '/') {
        cur.advance();
        expect_str(cur, "graph>", "'graph>'");
        break;
      }
      std::string name = xml_read_name(cur);
      XmlTag tag = xml_parse_tag(cur);
      if (name == "entity") {
        if (saw_relation)
          syntax_fail_msg(cur, "entity element after relation element");
        Entity e;
        e.id = xml_take_required(cur, tag, "entity", "id");
        auto it = tag.attributes.find("label");
        if (it != tag.attributes.end()) {
          e.label = std::move(it->second);
          tag.attributes.erase(it);
        }
        xml_reject_leftover(cur, tag, "entity");
        if (!tag.self_closed) e.attrs = xml_parse_attr_children(cur, "entity");
        g.entities.push_back(std::move(e));
      } else if (name == "relation") {
        saw_relation = true;
        Relation r;
        r.subject = xml_take_required(cur, tag, "relation", "subject");
        r.predicate = xml_take_required(cur, tag, "relation", "predicate");
        r.object = xml_take_required(cur, tag, "relation", "object");
        xml_reject_leftover(cur, tag, "relation");
        if (!tag.self_closed)
          r.attrs = xml_parse_attr_children(cur, "relation");
        g.relations.push_back(std::move(r));
      } else {
        syntax_fail_msg(cur, "unexpected element '" + name + "'");
      }
    }
  }
  xml_skip_ws(cur);
  if (!cur.at_end()) syntax_fail(cur, "end of input");
  return g;
}

// ---------------------------------------------------------------------------
// natural-language

void nl_append_quoted(std::string& out, const std::string& s) {
  out.push_back('"');
  for (unsigned char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\x{%02x}", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back('"');
}

bool nl_key_needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  if (s.front() == '"') return true;
  for (unsigned char c : s) {
    if (c == ' ' || c == '"' || c == '\\' || c < 0x20) return true;
  }
  return false;
}

void nl_append_attrs(std::string& out, const AttrMap& attrs) {
  bool first = true;
  for (const auto& [k, v] : attrs) {
    out += first ? " with " : " and ";
    first = false;
    if (nl_key_needs_quotes(k)) {
      nl_append_quoted(out, k);
    } else {
      out += k;
    }
    out.push_back(' ');
    nl_append_quoted(out, v);
  }
}

std::string serialize_natural(const GraphState& g) {
  std::vector<std::string> sentences;
  for (const Entity* e : sorted_entities(g)) {
    std::string s = "Entity " + e->id;
    if (e->label) {
      s += " is a ";
      nl_append_quoted(s, *e->label);
    } else {
      s += " exists";
    }
    nl_append_attrs(s, e->attrs);
    s.push_back('.');
    sentences.push_back(std::move(s));
  }
  for (const Relation* r : sorted_relations(g)) {
    std::string s = r->subject + " has relation ";
    nl_append_quoted(s, r->predicate);
    s += " to " + r->object;
    nl_append_attrs(s, r->attrs);
    s.push_back('.');
    sentences.push_back(std::move(s));
  }
  if (sentences.empty()) return "";
  std::string out;
  for (size_t i = 0; i < sentences.size(); ++i) {
    if (i) out.push_back(' ');
    out += sentences[i];
  }
  out.push_back('\n');
  return out;
}

struct NlParser {
  Cursor cur;
  GraphState g;

  explicit NlParser(const std::string& text) : cur(text) {}

  // " with k \"v\" and k2 \"v2\""; the caller handles the final '.'.
  AttrMap attrs_clause() {
    expect_str(cur, " with ", "' with '");
    AttrMap attrs;
    for (;;) {
      std::string key;
      if (cur.peek() == '"') {
        key = parse_quoted(cur, true);
      } else {
        key = scan_until(cur, " ");
      }
      expect_char(cur, ' ', "' '");
      std::string value = parse_quoted(cur, true);
      check_duplicate_attr(attrs, key);
      attrs.emplace(std::move(key), std::move(value));
      if (!cur.starts_with(" and ")) return attrs;
      expect_str(cur, " and ", "' and '");
    }
  }

  AttrMap maybe_attrs_then_dot() {
    AttrMap attrs;
    if (cur.starts_with(" with ")) attrs = attrs_clause();
    expect_char(cur, '.', "'.'");
    return attrs;
  }

  // Returns false (cursor position undefined, caller restores) when the text
  // after "Entity " does not continue as an entity sentence.
  bool try_entity_sentence() {
    expect_str(cur, "Entity ", "'Entity '");
    Entity e;
    e.id = scan_until(cur, " ");
    if (cur.peek() != ' ' || e.id.empty()) return false;
    cur.advance();
    if (cur.starts_with("is a \"")) {
      expect_str(cur, "is a ", "'is a '");
      e.label = parse_quoted(cur, true);
    } else if (cur.starts_with("exists.") || cur.starts_with("exists ")) {
      expect_str(cur, "exists", "'exists'");
    } else {
      return false;
    }
    e.attrs = maybe_attrs_then_dot();
    g.entities.push_back(std::move(e));
    return true;
  }

  void relation_sentence() {
    Relation r;
    r.subject = scan_until(cur, " ");
    if (r.subject.empty()) syntax_fail(cur, "entity identifier");
    expect_str(cur, " has relation ", "' has relation '");
    r.predicate = parse_quoted(cur, true);
    expect_str(cur, " to ", "' to '");
    std::string tok = scan_until(cur, " ");
    if (tok.empty()) syntax_fail(cur, "entity identifier");
    if (cur.peek() == ' ') {
      if (tok.back() != '.') {
        r.object = std::move(tok);
        r.attrs = attrs_clause();
        expect_char(cur, '.', "'.'");
      } else {
        Cursor::Mark saved = cur.mark();
        bool as_attrs = false;
        if (cur.starts_with(" with ")) {
          try {
            AttrMap attrs = attrs_clause();
            expect_char(cur, '.', "'.'");
            r.object = std::move(tok);
            r.attrs = std::move(attrs);
            as_attrs = true;
          } catch (const Error&) {
            cur.rewind(saved);
          }
        }
        if (!as_attrs) {
          tok.pop_back();
          r.object = std::move(tok);
        }
      }
    } else {
      if (tok.empty() || tok.back() != '.') syntax_fail(cur, "'.'");
      tok.pop_back();
      r.object = std::move(tok);
    }
    g.relations.push_back(std::move(r));
  }

  void sentence() {
    if (cur.starts_with("Entity ")) {
      Cursor::Mark saved = cur.mark();
      if (try_entity_sentence()) return;
      cur.rewind(saved);
    }
    relation_sentence();
  }

  GraphState run() {
    if (cur.at_end()) return std::move(g);
    if (cur.peek() == '\n') {
      cur.advance();
      if (!cur.at_end()) syntax_fail(cur, "end of input");
      return std::move(g);
    }
    for (;;) {
      sentence();
      if (cur.peek() == '\n') {
        cur.advance();
        if (!cur.at_end()) syntax_fail(cur, "end of input");
        break;
      }
      if (cur.peek() == ' ') {
        cur.advance();
        continue;
      }
      syntax_fail(cur, cur.at_end() ? "newline" : "' ' or newline");
    }
    return std::move(g);
  }
};

// ---------------------------------------------------------------------------
// canonical JSON

nlohmann::ordered_json graph_json_impl(const GraphState& g,
                                       bool include_graph_id) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (include_graph_id && g.graph_id) j["graph_id"] = *g.graph_id;
  nlohmann::ordered_json entities = nlohmann::ordered_json::array();
  for (const Entity* e : sorted_entities(g)) {
    nlohmann::ordered_json je = nlohmann::ordered_json::object();
    je["id"] = e->id;
    if (e->label) je["label"] = *e->label;
    if (!e->attrs.empty()) {
      nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
      for (const auto& [k, v] : e->attrs) attrs[k] = v;
      je["attrs"] = std::move(attrs);
    }
    entities.push_back(std::move(je));
  }
  j["entities"] = std::move(entities);
  nlohmann::ordered_json relations = nlohmann::ordered_json::array();
  for (const Relation* r : sorted_relations(g)) {
    nlohmann::ordered_json jr = nlohmann::ordered_json::object();
    jr["subject"] = r->subject;
    jr["predicate"] = r->predicate;
    jr["object"] = r->object;
    if (!r->attrs.empty()) {
      nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
      for (const auto& [k, v] : r->attrs) attrs[k] = v;
      jr["attrs"] = std::move(attrs);
    }
    relations.push_back(std::move(jr));
  }
  j["relations"] = std::move(relations);
  return j;
}

[[noreturn]] void json_shape_fail(const std::string& where,
                                  const std::string& what) {
  throw Error("syntax-error", where + ": " + what);
}

std::string json_require_string(const nlohmann::json& j,
                                const std::string& where) {
  if (!j.is_string()) json_shape_fail(where, "expected string");
  return j.get<std::string>();
}

AttrMap json_require_attrs(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) json_shape_fail(where, "expected object");
  AttrMap attrs;
  for (const auto& [k, v] : j.items()) {
    attrs.emplace(k, json_require_string(v, where + "." + k));
  }
  return attrs;
}

GraphState graph_from_json_impl(const nlohmann::json& j) {
  if (!j.is_object()) json_shape_fail("graph", "expected object");
  GraphState g;
  for (const auto& [key, value] : j.items()) {
    if (key == "graph_id") {
      g.graph_id = json_require_string(value, "graph_id");
    } else if (key == "entities") {
      if (!value.is_array()) json_shape_fail("entities", "expected array");
      size_t i = 0;
      for (const auto& je : value) {
        std::string where = "entities[" + std::to_string(i++) + "]";
        if (!je.is_object()) json_shape_fail(where, "expected object");
        Entity e;
        bool saw_id = false;
        for (const auto& [k, v] : je.items()) {
          if (k == "id") {
            e.id = json_require_string(v, where + ".id");
            saw_id = true;
          } else if (k == "label") {
            e.label = json_require_string(v, where + ".label");
          } else if (k == "attrs") {
            e.attrs = json_require_attrs(v, where + ".attrs");
          } else {
            json_shape_fail(where, "unexpected key '" + k + "'");
          }
        }
        if (!saw_id) json_shape_fail(where, "missing key 'id'");
        g.entities.push_back(std::move(e));
      }
    } else if (key == "relations") {
      if (!value.is_array()) json_shape_fail("relations", "expected array");
      size_t i = 0;
      for (const auto& jr : value) {
        std::string where = "relations[" + std::to_string(i++) + "]";
        if (!jr.is_object()) json_shape_fail(where, "expected object");
        Relation r;
        bool saw_s = false, saw_p = false, saw_o = false;
        for (const auto& [k, v] : jr.items()) {
          if (k == "subject") {
            r.subject = json_require_string(v, where + ".subject");
            saw_s = true;
          } else if (k == "predicate") {
            r.predicate = json_require_string(v, where + ".predicate");
            saw_p = true;
          } else if (k == "object") {
            r.object = json_require_string(v, where + ".object");
            saw_o = true;
          } else if (k == "attrs") {
            r.attrs = json_require_attrs(v, where + ".attrs");
          } else {
            json_shape_fail(where, "unexpected key '" + k + "'");
          }
        }
        if (!saw_s) json_shape_fail(where, "missing key 'subject'");
        if (!saw_p) json_shape_fail(where, "missing key 'predicate'");
        if (!saw_o) json_shape_fail(where, "missing key 'object'");
        g.relations.push_back(std::move(r));
      }
    } else {
      json_shape_fail("graph", "unexpected key '" + key + "'");
    }
  }
  if (!j.contains("entities")) json_shape_fail("graph", "missing key 'entities'");
  if (!j.contains("relations"))
    json_shape_fail("graph", "missing key 'relations'");
  return g;
}

// ---------------------------------------------------------------------------
// post-parse semantic validation

GraphState finalize_parsed(GraphState g, const ParseOptions& options) {
  if (options.dedupe) {
    std::vector<Entity> entities;
    for (auto& e : g.entities) {
      bool dup = false;
      for (const auto& kept : entities) {
        if (kept == e) {
          dup = true;
          break;
        }
      }
      if (!dup) entities.push_back(std::move(e));
    }
    g.entities = std::move(entities);
    std::vector<Relation> relations;
    for (auto& r : g.relations) {
      bool dup = false;
      for (const auto& kept : relations) {
        if (kept == r) {
          dup = true;
          break;
        }
      }
      if (!dup) relations.push_back(std::move(r));
    }
    g.relations = std::move(relations);
  }
  std::set<std::string> ids;
  for (const auto& e : g.entities) {
    if (!ids.insert(e.id).second)
      throw Error("semantic-error", "duplicate entity id " + e.id);
  }
  for (const auto& r : g.relations) {
    if (!ids.count(r.subject))
      throw Error("semantic-error", "undeclared entity " + r.subject);
    if (!ids.count(r.object))
      throw Error("semantic-error", "undeclared entity " + r.object);
  }
  std::set<Triple> triples;
  for (const auto& r : g.relations) {
    if (!triples.insert(triple_of(r)).second)
      throw Error("semantic-error", "duplicate relation (" + r.subject + ", " +
                                        r.predicate + ", " + r.object + ")");
  }
  ValidationResult vr = validate(g);
  if (!vr.ok())
    throw Error("semantic-error", vr.violations.front().detail);
  return g;
}

}  // namespace

const char* to_string(SchemaRealization r) {
  switch (r) {
    case SchemaRealization::unified_text: return "unified-text";
    case SchemaRealization::xml_style: return "xml-style";
    case SchemaRealization::natural_language: return "natural-language";
    case SchemaRealization::canonical_json: return "canonical-json";
  }
  return "unified-text";
}

std::optional<SchemaRealization> realization_from_string(std::string_view s) {
  if (s == "unified-text") return SchemaRealization::unified_text;
  if (s == "xml-style") return SchemaRealization::xml_style;
  if (s == "natural-language") return SchemaRealization::natural_language;
  if (s == "canonical-json") return SchemaRealization::canonical_json;
  return std::nullopt;
}

std::string serialize(const GraphState& g, SchemaRealization r) {
  require_valid(g);
  switch (r) {
    case SchemaRealization::unified_text: return serialize_unified(g);
    case SchemaRealization::xml_style: return serialize_xml(g);
    case SchemaRealization::natural_language: return serialize_natural(g);
    case SchemaRealization::canonical_json:
      return graph_json_impl(g, false).dump();
  }
  throw Error("invalid-graph", "unknown realization");
}

GraphState parse(const std::string& text, SchemaRealization r,
                 const ParseOptions& options) {
  switch (r) {
    case SchemaRealization::unified_text:
      return finalize_parsed(parse_unified(text), options);
    case SchemaRealization::xml_style:
      return finalize_parsed(parse_xml(text), options);
    case SchemaRealization::natural_language:
      return finalize_parsed(NlParser(text).run(), options);
    case SchemaRealization::canonical_json: {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error("syntax-error", e.what());
      }
      return finalize_parsed(graph_from_json_impl(j), options);
    }
  }
  throw Error("syntax-error", "unknown realization");
}

nlohmann::ordered_json graph_to_json(const GraphState& g) {
  return graph_json_impl(g, true);
}

GraphState graph_from_json(const nlohmann::json& j,
                           const ParseOptions& options) {
  return finalize_parsed(graph_from_json_impl(j), options);
}

}  // namespace gsub
