#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace idpa {

// Minimal JSON document builder for the canonical report: object keys are
// emitted sorted (std::map), numbers are written exactly as formatted by the
// caller, output is 2-space indented with LF endings. Owning the emitter is
// what pins the report bytes across platforms and library versions.
class JsonValue {
 public:
  using Array = std::vector<JsonValue>;
  using Object = std::map<std::string, JsonValue>;

  JsonValue() : value_(Object{}) {}
  static JsonValue string(std::string s) { return JsonValue(Str{std::move(s)}); }
  // `text` must already be a valid JSON number token ("1", "0.5", "42").
  static JsonValue number(std::string text) { return JsonValue(Num{std::move(text)}); }
  static JsonValue number(int n) { return JsonValue(Num{std::to_string(n)}); }
  static JsonValue array() { return JsonValue(Array{}); }
  static JsonValue object() { return JsonValue(Object{}); }

  bool is_array() const { return std::holds_alternative<Array>(value_); }
  bool is_object() const { return std::holds_alternative<Object>(value_); }

  void push(JsonValue v) { std::get<Array>(value_).push_back(std::move(v)); }
  JsonValue& operator[](const std::string& key) { return std::get<Object>(value_)[key]; }
  void set(const std::string& key, JsonValue v) { std::get<Object>(value_)[key] = std::move(v); }

  std::string dump() const {
    std::string out;
    write(out, 0);
    out += '\n';
    return out;
  }

  static std::string escape(const std::string& s) {
    std::string out;
    for (unsigned char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
          if (c < 0x20) {
            static const char* hex = "0123456789abcdef";
            out += "\\u00";
            out += hex[c >> 4];
            out += hex[c & 0xF];
          } else {
            out += static_cast<char>(c);
          }
      }
    }
    return out;
  }

 private:
  struct Str {
    std::string value;
  };
  struct Num {
    std::string value;
  };

  explicit JsonValue(Str s) : value_(std::move(s)) {}
  explicit JsonValue(Num n) : value_(std::move(n)) {}
  explicit JsonValue(Array a) : value_(std::move(a)) {}
  explicit JsonValue(Object o) : value_(std::move(o)) {}

  void write(std::string& out, int depth) const {
    std::string indent(static_cast<size_t>(depth) * 2, ' ');
    std::string inner(static_cast<size_t>(depth + 1) * 2, ' ');
    if (const auto* s = std::get_if<Str>(&value_)) {
      out += '"';
      out += escape(s->value);
      out += '"';
    } else if (const auto* n = std::get_if<Num>(&value_)) {
      out += n->value;
    } else if (const auto* a = std::get_if<Array>(&value_)) {
      if (a->empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (size_t i = 0; i < a->size(); ++i) {
        out += inner;
        (*a)[i].write(out, depth + 1);
        if (i + 1 < a->size()) {
          out += ',';
        }
        out += '\n';
      }
      out += indent;
      out += ']';
    } else if (const auto* o = std::get_if<Object>(&value_)) {
      if (o->empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      size_t i = 0;
      for (const auto& [key, value] : *o) {
        out += inner;
        out += '"';
        out += escape(key);
        out += "\": ";
        value.write(out, depth + 1);
        if (++i < o->size()) {
          out += ',';
        }
        out += '\n';
      }
      out += indent;
      out += '}';
    }
  }

  std::variant<Str, Num, Array, Object> value_;
};

}  // namespace idpa
