#include "idpa/parser.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace idpa {

namespace {

enum class TokenKind { Word, String, KeyValue, KeyString, Invalid };

struct Token {
  TokenKind kind = TokenKind::Word;
  std::string text;   // word text, or decoded string for String
  std::string key;    // KeyValue / KeyString
  std::string value;  // KeyValue: raw word; KeyString: decoded string
  SourceSpan span;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

class LineTokenizer {
 public:
  LineTokenizer(std::string_view line, int line_no, std::vector<Diagnostic>& diagnostics)
      : line_(line), line_no_(line_no), diagnostics_(diagnostics) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (pos_ < line_.size()) {
      if (is_space(line_[pos_])) {
        ++pos_;
        continue;
      }
      if (line_[pos_] == '#') {
        break;  // comment to end of line
      }
      if (line_[pos_] == '"') {
        tokens.push_back(read_string_token());
        continue;
      }
      tokens.push_back(read_word_token());
    }
    return tokens;
  }

 private:
  Token read_string_token() {
    size_t start = pos_;
    std::string decoded = read_string_body();
    Token t;
    t.kind = TokenKind::String;
    t.text = std::move(decoded);
    t.span = span_from(start);
    return t;
  }

  // pos_ at the opening quote; returns decoded content, pos_ after the
  // closing quote (or end of line when unterminated).
  std::string read_string_body() {
    size_t start = pos_;
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < line_.size()) {
      char c = line_[pos_];
      if (c == '"') {
        ++pos_;
        return out;
      }
      if (c == '\\') {
        if (pos_ + 1 < line_.size() && (line_[pos_ + 1] == '"' || line_[pos_ + 1] == '\\')) {
          out += line_[pos_ + 1];
          pos_ += 2;
          continue;
        }
        report("invalid escape sequence in string", pos_, 2);
        ++pos_;
        continue;
      }
      out += c;
      ++pos_;
    }
    report("unterminated string", start, pos_ - start);
    return out;
  }

  Token read_word_token() {
    size_t start = pos_;
    while (pos_ < line_.size() && !is_space(line_[pos_]) && line_[pos_] != '#' &&
           line_[pos_] != '"') {
      ++pos_;
    }
    std::string word(line_.substr(start, pos_ - start));
    Token t;
    t.span = span_from(start);
    // key="..." is one logical token: the quote directly follows '='.
    if (pos_ < line_.size() && line_[pos_] == '"' && !word.empty() && word.back() == '=') {
      t.kind = TokenKind::KeyString;
      t.key = word.substr(0, word.size() - 1);
      t.value = read_string_body();
      t.span.length = static_cast<int>(pos_ - start);
      return t;
    }
    if (auto eq = word.find('='); eq != std::string::npos) {
      t.kind = TokenKind::KeyValue;
      t.key = word.substr(0, eq);
      t.value = word.substr(eq + 1);
      t.text = std::move(word);
      return t;
    }
    t.kind = TokenKind::Word;
    t.text = std::move(word);
    return t;
  }

  SourceSpan span_from(size_t start) const {
    return SourceSpan{line_no_, static_cast<int>(start) + 1,
                      std::max(1, static_cast<int>(pos_ - start))};
  }

  void report(const std::string& message, size_t start, size_t length) {
    diagnostics_.push_back({Severity::Error, message, "",
                            SourceSpan{line_no_, static_cast<int>(start) + 1,
                                       std::max(1, static_cast<int>(length))}});
  }

  std::string_view line_;
  int line_no_;
  size_t pos_ = 0;
  std::vector<Diagnostic>& diagnostics_;
};

// A reference to resolve once the whole file has been read; the grammar
// allows forward references.
struct PendingRef {
  enum class Kind { Node, Data, Flow, AnnotationTarget } kind;
  std::string id;
  SourceSpan span;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParseResult run() {
    if (text_.size() >= 3 && static_cast<unsigned char>(text_[0]) == 0xEF &&
        static_cast<unsigned char>(text_[1]) == 0xBB &&
        static_cast<unsigned char>(text_[2]) == 0xBF) {
      error({1, 1, 3}, "byte order mark is not allowed; save the file as plain UTF-8");
      text_.remove_prefix(3);
    }
    if (!check_utf8()) {
      return finish();
    }
    int line_no = 0;
    size_t offset = 0;
    while (offset <= text_.size() && !aborted_) {
      size_t newline = text_.find('\n', offset);
      std::string_view line = newline == std::string_view::npos
                                  ? text_.substr(offset)
                                  : text_.substr(offset, newline - offset);
      ++line_no;
      parse_line(line, line_no);
      if (newline == std::string_view::npos) {
        break;
      }
      offset = newline + 1;
    }
    if (!aborted_) {
      if (!saw_header_) {
        diagnostics_.push_back({Severity::Warning, "missing model header", "model",
                                SourceSpan{1, 1, 1}});
      }
      resolve_references();
    }
    return finish();
  }

 private:
  ParseResult finish() {
    std::stable_sort(diagnostics_.begin(), diagnostics_.end(),
                     [](const Diagnostic& a, const Diagnostic& b) {
                       SourceSpan sa = a.span.value_or(SourceSpan{0, 0, 0});
                       SourceSpan sb = b.span.value_or(SourceSpan{0, 0, 0});
                       return std::tie(sa.line, sa.column, a.message) <
                              std::tie(sb.line, sb.column, b.message);
                     });
    ParseResult result;
    result.diagnostics = std::move(diagnostics_);
    if (!has_errors(result.diagnostics)) {
      result.model = std::move(model_);
    }
    return result;
  }

  bool check_utf8() {
    size_t i = 0;
    int line = 1;
    int col = 1;
    const auto* bytes = reinterpret_cast<const unsigned char*>(text_.data());
    while (i < text_.size()) {
      unsigned char b = bytes[i];
      size_t len = 0;
      if (b < 0x80) {
        len = 1;
      } else if ((b & 0xE0) == 0xC0 && b >= 0xC2) {
        len = 2;
      } else if ((b & 0xF0) == 0xE0) {
        len = 3;
      } else if ((b & 0xF8) == 0xF0 && b <= 0xF4) {
        len = 4;
      } else {
        error({line, col, 1}, "invalid UTF-8 byte");
        return false;
      }
      if (i + len > text_.size()) {
        error({line, col, 1}, "truncated UTF-8 sequence");
        return false;
      }
      for (size_t k = 1; k < len; ++k) {
        if ((bytes[i + k] & 0xC0) != 0x80) {
          error({line, col, 1}, "invalid UTF-8 continuation byte");
          return false;
        }
      }
      if (b == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      i += len;
    }
    return true;
  }

  void parse_line(std::string_view line, int line_no) {
    std::vector<Diagnostic> token_errors;
    LineTokenizer tokenizer(line, line_no, token_errors);
    std::vector<Token> tokens = tokenizer.run();
    for (Diagnostic& d : token_errors) {
      push(std::move(d));
      if (aborted_) {
        return;
      }
    }
    if (!token_errors.empty() || tokens.empty()) {
      return;  // recover at line granularity
    }
    const Token& head = tokens[0];
    if (head.kind != TokenKind::Word) {
      error(head.span, "expected a statement keyword");
      return;
    }
    const std::string& kw = head.text;
    if (kw == "model") {
      parse_header(tokens);
    } else if (kw == "entity") {
      parse_node(tokens, NodeKind::ExternalEntity);
    } else if (kw == "process") {
      parse_node(tokens, NodeKind::Process);
    } else if (kw == "store") {
      parse_node(tokens, NodeKind::DataStore);
    } else if (kw == "data") {
      parse_data(tokens);
    } else if (kw == "flow") {
      parse_flow(tokens);
    } else if (kw == "annotate") {
      parse_annotate(tokens);
    } else if (kw == "exclude") {
      parse_exclude(tokens);
    } else if (kw == "policy") {
      parse_policy(tokens);
    } else {
      error(head.span, "unknown keyword '" + kw + "'");
    }
  }

  void parse_header(const std::vector<Token>& tokens) {
    if (saw_header_) {
      error(tokens[0].span, "duplicate model header");
      return;
    }
    saw_header_ = true;
    if (tokens.size() < 2 || tokens[1].kind != TokenKind::String) {
      error(tokens[0].span, "model header requires a quoted name");
      return;
    }
    if (tokens.size() > 2) {
      error(tokens[2].span, "unexpected token after model header");
      return;
    }
    model_.name = tokens[1].text;
  }

  // Shared "<keyword> ID STRING" prefix; returns false after reporting.
  bool expect_id_and_label(const std::vector<Token>& tokens, std::string& id, std::string& label,
                           const char* what) {
    if (tokens.size() < 2 || tokens[1].kind != TokenKind::Word) {
      error(tokens[0].span, std::string(what) + " requires an identifier");
      return false;
    }
    id = tokens[1].text;
    if (!is_valid_token(id)) {
      error(tokens[1].span, "invalid identifier '" + id + "'");
      return false;
    }
    if (tokens.size() < 3 || tokens[2].kind != TokenKind::String) {
      error(tokens[1].span, std::string(what) + " requires a quoted label");
      return false;
    }
    label = tokens[2].text;
    return true;
  }

  void parse_node(const std::vector<Token>& tokens, NodeKind kind) {
    Node node;
    node.kind = kind;
    std::string id;
    if (!expect_id_and_label(tokens, id, node.label, to_keyword_statement(kind))) {
      return;
    }
    node.id = NodeId{id};
    bool bad = false;
    for (size_t i = 3; i < tokens.size() && !bad; ++i) {
      const Token& t = tokens[i];
      if (t.kind != TokenKind::KeyValue) {
        error(t.span, "expected attribute of the form key=value");
        bad = true;
      } else if (t.key == "capabilities" && kind == NodeKind::Process) {
        bad = !parse_capability_list(t, node.capabilities);
      } else if (t.key == "government-access" && kind != NodeKind::ExternalEntity) {
        bad = !parse_yes_no(t, node.government_access);
      } else {
        error(t.span, "unknown attribute '" + t.key + "' for " + to_keyword_statement(kind));
        bad = true;
      }
    }
    if (bad) {
      return;
    }
    if (!declare(node_ids_, id, tokens[1].span, "node")) {
      return;
    }
    model_.nodes.push_back(std::move(node));
  }

  void parse_data(const std::vector<Token>& tokens) {
    DataObject data;
    std::string id;
    if (!expect_id_and_label(tokens, id, data.label, "data")) {
      return;
    }
    data.id = DataId{id};
    bool saw_subjects = false;
    bool bad = false;
    for (size_t i = 3; i < tokens.size() && !bad; ++i) {
      const Token& t = tokens[i];
      if (t.kind != TokenKind::KeyValue) {
        error(t.span, "expected attribute of the form key=value");
        bad = true;
      } else if (t.key == "subjects") {
        auto subjects = subjects_from_keyword(t.value);
        if (!subjects) {
          error(t.span, "invalid subjects value '" + t.value + "'");
          bad = true;
        } else if (saw_subjects) {
          error(t.span, "duplicate subjects attribute");
          bad = true;
        } else {
          data.subjects = *subjects;
          saw_subjects = true;
        }
      } else if (t.key == "likelihood") {
        auto likelihood = Likelihood::parse(t.value);
        if (!likelihood) {
          error(t.span,
                "invalid likelihood '" + t.value + "' (expected 0..1 with at most 2 fraction digits)");
          bad = true;
        } else {
          data.likelihood = *likelihood;
        }
      } else if (t.key == "derived-from") {
        std::vector<std::string> ids;
        if (!parse_id_list(t, ids)) {
          bad = true;
        } else {
          for (std::string& ref : ids) {
            pending_.push_back({PendingRef::Kind::Data, ref, t.span});
            data.derived_from.push_back(DataId{std::move(ref)});
          }
        }
      } else if (t.key == "categories") {
        std::vector<std::string> tags;
        if (!parse_id_list(t, tags)) {
          bad = true;
        } else {
          data.categories = std::move(tags);
        }
      } else {
        error(t.span, "unknown attribute '" + t.key + "' for data");
        bad = true;
      }
    }
    if (bad) {
      return;
    }
    if (!saw_subjects) {
      error(tokens[1].span, "data requires a subjects= attribute");
      return;
    }
    if (data.likelihood && data.subjects != SubjectsClass::MayIncludeOthers) {
      error(tokens[1].span, "likelihood is only meaningful for subjects=may-include-others");
      return;
    }
    dedupe_sorted(data.derived_from, tokens[1].span, "derived-from");
    dedupe_sorted_strings(data.categories, tokens[1].span, "categories");
    if (!declare(data_ids_, id, tokens[1].span, "data")) {
      return;
    }
    model_.data_objects.push_back(std::move(data));
  }

  void parse_flow(const std::vector<Token>& tokens) {
    // flow ID SRC -> DST carries=... [initiator=...] [transform=...]
    if (tokens.size() < 5 || tokens[1].kind != TokenKind::Word ||
        tokens[2].kind != TokenKind::Word || tokens[3].kind != TokenKind::Word ||
        tokens[3].text != "->" || tokens[4].kind != TokenKind::Word) {
      error(tokens[0].span, "flow requires the form: flow <id> <source> -> <destination> carries=<ids>");
      return;
    }
    Flow flow;
    if (!is_valid_token(tokens[1].text)) {
      error(tokens[1].span, "invalid identifier '" + tokens[1].text + "'");
      return;
    }
    flow.id = FlowId{tokens[1].text};
    flow.source = NodeId{tokens[2].text};
    flow.destination = NodeId{tokens[4].text};
    pending_.push_back({PendingRef::Kind::Node, tokens[2].text, tokens[2].span});
    pending_.push_back({PendingRef::Kind::Node, tokens[4].text, tokens[4].span});

    bool saw_carries = false;
    bool bad = false;
    for (size_t i = 5; i < tokens.size() && !bad; ++i) {
      const Token& t = tokens[i];
      if (t.kind != TokenKind::KeyValue) {
        error(t.span, "expected attribute of the form key=value");
        bad = true;
      } else if (t.key == "carries") {
        std::vector<std::string> ids;
        if (!parse_id_list(t, ids)) {
          bad = true;
        } else {
          saw_carries = true;
          for (std::string& ref : ids) {
            pending_.push_back({PendingRef::Kind::Data, ref, t.span});
            flow.carries.push_back(DataId{std::move(ref)});
          }
        }
      } else if (t.key == "initiator") {
        if (!is_valid_token(t.value)) {
          error(t.span, "invalid identifier '" + t.value + "'");
          bad = true;
        } else {
          pending_.push_back({PendingRef::Kind::Node, t.value, t.span});
          flow.initiator = NodeId{t.value};
        }
      } else if (t.key == "transform") {
        auto transform = transform_from_keyword(t.value);
        if (!transform) {
          error(t.span, "invalid transform '" + t.value + "'");
          bad = true;
        } else {
          flow.transform = *transform;
        }
      } else {
        error(t.span, "unknown attribute '" + t.key + "' for flow");
        bad = true;
      }
    }
    if (bad) {
      return;
    }
    if (!saw_carries || flow.carries.empty()) {
      error(tokens[1].span, "flow requires a non-empty carries= attribute");
      return;
    }
    if (flow.initiator && *flow.initiator == flow.source) {
      flow.initiator.reset();  // normalize: source is the default initiator
    }
    dedupe_sorted(flow.carries, tokens[1].span, "carries");
    if (!declare(flow_ids_, flow.id.value, tokens[1].span, "flow")) {
      return;
    }
    model_.flows.push_back(std::move(flow));
  }

  void parse_annotate(const std::vector<Token>& tokens) {
    if (tokens.size() < 2 || tokens[1].kind != TokenKind::Word) {
      error(tokens[0].span, "annotate requires a flow or data identifier");
      return;
    }
    AcaAnnotation annotation;
    annotation.target = tokens[1].text;
    pending_.push_back({PendingRef::Kind::AnnotationTarget, annotation.target, tokens[1].span});
    if (tokens.size() < 3) {
      error(tokens[1].span, "annotate requires at least one key=value pair");
      return;
    }
    std::set<std::string> seen;
    for (size_t i = 2; i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      if (t.kind != TokenKind::KeyValue) {
        error(t.span, "expected attribute of the form key=value");
        return;
      }
      if (!seen.insert(t.key).second) {
        error(t.span, "duplicate annotation key '" + t.key + "'");
        return;
      }
      if (t.key == "access-control") {
        auto value = access_control_from_keyword(t.value);
        if (!value) {
          error(t.span, "invalid access-control value '" + t.value + "'");
          return;
        }
        annotation.access_control = *value;
        continue;
      }
      TriState* field = nullptr;
      if (t.key == "awareness.sender") {
        field = &annotation.awareness_sender;
      } else if (t.key == "awareness.stakeholders") {
        field = &annotation.awareness_stakeholders;
      } else if (t.key == "consent.sender") {
        field = &annotation.consent_sender;
      } else if (t.key == "consent.stakeholders") {
        field = &annotation.consent_stakeholders;
      } else {
        error(t.span, "unknown annotation key '" + t.key + "'");
        return;
      }
      auto value = tristate_from_keyword(t.value);
      if (!value) {
        error(t.span, "invalid value '" + t.value + "' (expected yes, no, or unknown)");
        return;
      }
      *field = *value;
    }
    model_.aca_annotations.push_back(std::move(annotation));
  }

  void parse_exclude(const std::vector<Token>& tokens) {
    if (tokens.size() < 2 || tokens[1].kind != TokenKind::Word) {
      error(tokens[0].span, "exclude requires a flow identifier");
      return;
    }
    MisactorExclusion exclusion;
    exclusion.flow = FlowId{tokens[1].text};
    pending_.push_back({PendingRef::Kind::Flow, tokens[1].text, tokens[1].span});
    bool saw_misactor = false;
    bool saw_reason = false;
    for (size_t i = 2; i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      if (t.kind == TokenKind::KeyValue && t.key == "misactor") {
        std::set<MisactorKind> kinds;
        if (t.value.empty()) {
          error(t.span, "misactor list must not be empty");
          return;
        }
        for (const std::string& part : split_list(t.value)) {
          auto kind = misactor_from_keyword(part);
          if (!kind) {
            error(t.span, "unknown misactor '" + part + "'");
            return;
          }
          kinds.insert(*kind);
        }
        exclusion.excluded.assign(kinds.begin(), kinds.end());
        saw_misactor = true;
      } else if (t.kind == TokenKind::KeyString && t.key == "reason") {
        if (t.value.empty()) {
          error(t.span, "exclusion reason must not be empty");
          return;
        }
        exclusion.reason = t.value;
        saw_reason = true;
      } else {
        error(t.span, "expected misactor=<list> and reason=\"...\"");
        return;
      }
    }
    if (!saw_misactor || !saw_reason) {
      error(tokens[1].span, "exclude requires misactor=<list> and reason=\"...\"");
      return;
    }
    model_.exclusions.push_back(std::move(exclusion));
  }

  void parse_policy(const std::vector<Token>& tokens) {
    if (saw_policy_) {
      error(tokens[0].span, "duplicate policy block");
      return;
    }
    if (tokens.size() < 2) {
      error(tokens[0].span, "policy requires at least one key=value pair");
      return;
    }
    Policy policy;
    std::set<std::string> seen;
    for (size_t i = 1; i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      if (t.kind != TokenKind::KeyValue) {
        error(t.span, "expected attribute of the form key=value");
        return;
      }
      if (!seen.insert(t.key).second) {
        error(t.span, "duplicate policy key '" + t.key + "'");
        return;
      }
      TriState* field = nullptr;
      if (t.key == "accountability") {
        field = &policy.accountability;
      } else if (t.key == "auditability") {
        field = &policy.auditability;
      } else if (t.key == "alignment") {
        field = &policy.alignment;
      } else {
        error(t.span, "unknown policy key '" + t.key + "'");
        return;
      }
      auto value = tristate_from_keyword(t.value);
      if (!value) {
        error(t.span, "invalid value '" + t.value + "' (expected yes, no, or unknown)");
        return;
      }
      *field = *value;
    }
    saw_policy_ = true;
    model_.policy = policy;
  }

  void resolve_references() {
    for (const PendingRef& ref : pending_) {
      if (aborted_) {
        return;
      }
      switch (ref.kind) {
        case PendingRef::Kind::Node:
          if (node_ids_.count(ref.id) == 0) {
            error(ref.span, "unresolved node reference " + ref.id);
          }
          break;
        case PendingRef::Kind::Data:
          if (data_ids_.count(ref.id) == 0) {
            error(ref.span, "unresolved data reference " + ref.id);
          }
          break;
        case PendingRef::Kind::Flow:
          if (flow_ids_.count(ref.id) == 0) {
            error(ref.span, "unresolved flow reference " + ref.id);
          }
          break;
        case PendingRef::Kind::AnnotationTarget:
          if (flow_ids_.count(ref.id) == 0 && data_ids_.count(ref.id) == 0) {
            error(ref.span, "unresolved annotation target " + ref.id);
          }
          break;
      }
    }
  }

  static const char* to_keyword_statement(NodeKind kind) {
    switch (kind) {
      case NodeKind::ExternalEntity: return "entity";
      case NodeKind::Process: return "process";
      case NodeKind::DataStore: return "store";
    }
    return "";
  }

  static std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
      if (c == ',') {
        parts.push_back(current);
        current.clear();
      } else {
        current += c;
      }
    }
    parts.push_back(current);
    return parts;
  }

  bool parse_id_list(const Token& t, std::vector<std::string>& out) {
    if (t.value.empty()) {
      error(t.span, t.key + " list must not be empty");
      return false;
    }
    for (const std::string& part : split_list(t.value)) {
      if (!is_valid_token(part)) {
        error(t.span, "invalid identifier '" + part + "' in " + t.key);
        return false;
      }
      out.push_back(part);
    }
    return true;
  }

  bool parse_capability_list(const Token& t, std::set<Capability>& out) {
    if (t.value.empty()) {
      error(t.span, "capabilities list must not be empty");
      return false;
    }
    for (const std::string& part : split_list(t.value)) {
      auto capability = capability_from_keyword(part);
      if (!capability) {
        error(t.span, "unknown capability '" + part + "'");
        return false;
      }
      out.insert(*capability);
    }
    return true;
  }

  bool parse_yes_no(const Token& t, bool& out) {
    if (t.value == "yes") {
      out = true;
      return true;
    }
    if (t.value == "no") {
      out = false;
      return true;
    }
    error(t.span, "invalid value '" + t.value + "' (expected yes or no)");
    return false;
  }

  template <class IdT>
  void dedupe_sorted(std::vector<IdT>& ids, SourceSpan span, const char* what) {
    std::sort(ids.begin(), ids.end());
    auto last = std::unique(ids.begin(), ids.end());
    if (last != ids.end()) {
      diagnostics_.push_back(
          {Severity::Warning, std::string("duplicate entries in ") + what, "", span});
      ids.erase(last, ids.end());
    }
  }

  void dedupe_sorted_strings(std::vector<std::string>& values, SourceSpan span, const char* what) {
    std::sort(values.begin(), values.end());
    auto last = std::unique(values.begin(), values.end());
    if (last != values.end()) {
      diagnostics_.push_back(
          {Severity::Warning, std::string("duplicate entries in ") + what, "", span});
      values.erase(last, values.end());
    }
  }

  bool declare(std::set<std::string>& ids, const std::string& id, SourceSpan span,
               const char* what) {
    if (!ids.insert(id).second) {
      error(span, std::string("duplicate ") + what + " id " + id);
      return false;
    }
    return true;
  }

  void error(SourceSpan span, std::string message) {
    push({Severity::Error, std::move(message), "", span});
  }

  void push(Diagnostic d) {
    if (aborted_) {
      return;
    }
    diagnostics_.push_back(std::move(d));
    if (diagnostics_.size() >= kMaxParseDiagnostics) {
      aborted_ = true;
    }
  }

  std::string_view text_;
  Model model_;
  std::vector<Diagnostic> diagnostics_;
  std::vector<PendingRef> pending_;
  std::set<std::string> node_ids_;
  std::set<std::string> data_ids_;
  std::set<std::string> flow_ids_;
  bool saw_header_ = false;
  bool saw_policy_ = false;
  bool aborted_ = false;
};

std::string quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  out += '"';
  return out;
}

template <class T, class F>
std::string join_mapped(const std::vector<T>& values, F&& render) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += render(values[i]);
  }
  return out;
}

}  // namespace

ParseResult parse(std::string_view text) { return Parser(text).run(); }

std::string serialize(const Model& model) {
  std::string out = "model " + quote(model.name) + "\n";

  std::vector<const Node*> nodes_by_kind[3];
  for (const Node& n : model.nodes) {
    nodes_by_kind[static_cast<int>(n.kind)].push_back(&n);
  }
  auto by_id = [](const auto* a, const auto* b) { return a->id < b->id; };
  for (NodeKind kind : {NodeKind::ExternalEntity, NodeKind::Process, NodeKind::DataStore}) {
    auto& group = nodes_by_kind[static_cast<int>(kind)];
    std::sort(group.begin(), group.end(), by_id);
    for (const Node* n : group) {
      switch (kind) {
        case NodeKind::ExternalEntity: out += "entity "; break;
        case NodeKind::Process: out += "process "; break;
        case NodeKind::DataStore: out += "store "; break;
      }
      out += n->id.value + " " + quote(n->label);
      if (!n->capabilities.empty()) {
        out += " capabilities=";
        bool first = true;
        for (Capability c : n->capabilities) {
          if (!first) {
            out += ',';
          }
          out += to_keyword(c);
          first = false;
        }
      }
      if (n->government_access) {
        out += " government-access=yes";
      }
      out += '\n';
    }
  }

  std::vector<const DataObject*> data;
  for (const DataObject& d : model.data_objects) {
    data.push_back(&d);
  }
  std::sort(data.begin(), data.end(), by_id);
  for (const DataObject* d : data) {
    out += "data " + d->id.value + " " + quote(d->label);
    out += " subjects=";
    out += to_keyword(d->subjects);
    if (d->likelihood) {
      out += " likelihood=" + d->likelihood->to_string();
    }
    if (!d->derived_from.empty()) {
      out += " derived-from=" +
             join_mapped(d->derived_from, [](const DataId& id) { return id.value; });
    }
    if (!d->categories.empty()) {
      out += " categories=" + join_mapped(d->categories, [](const std::string& s) { return s; });
    }
    out += '\n';
  }

  std::vector<const Flow*> flows;
  for (const Flow& f : model.flows) {
    flows.push_back(&f);
  }
  std::sort(flows.begin(), flows.end(), by_id);
  for (const Flow* f : flows) {
    out += "flow " + f->id.value + " " + f->source.value + " -> " + f->destination.value;
    out += " carries=" + join_mapped(f->carries, [](const DataId& id) { return id.value; });
    if (f->initiator && *f->initiator != f->source) {
      out += " initiator=" + f->initiator->value;
    }
    if (f->transform != Transform::None) {
      out += " transform=";
      out += to_keyword(f->transform);
    }
    out += '\n';
  }

  std::vector<const AcaAnnotation*> annotations;
  for (const AcaAnnotation& a : model.aca_annotations) {
    annotations.push_back(&a);
  }
  std::sort(annotations.begin(), annotations.end(),
            [](const AcaAnnotation* a, const AcaAnnotation* b) { return a->target < b->target; });
  for (const AcaAnnotation* a : annotations) {
    out += "annotate " + a->target;
    out += " awareness.sender=";
    out += to_keyword(a->awareness_sender);
    out += " awareness.stakeholders=";
    out += to_keyword(a->awareness_stakeholders);
    out += " consent.sender=";
    out += to_keyword(a->consent_sender);
    out += " consent.stakeholders=";
    out += to_keyword(a->consent_stakeholders);
    out += " access-control=";
    out += to_keyword(a->access_control);
    out += '\n';
  }

  std::vector<const MisactorExclusion*> exclusions;
  for (const MisactorExclusion& e : model.exclusions) {
    exclusions.push_back(&e);
  }
  std::sort(exclusions.begin(), exclusions.end(),
            [](const MisactorExclusion* a, const MisactorExclusion* b) {
              return std::tie(a->flow, a->excluded, a->reason) <
                     std::tie(b->flow, b->excluded, b->reason);
            });
  for (const MisactorExclusion* e : exclusions) {
    out += "exclude " + e->flow.value + " misactor=" +
           join_mapped(e->excluded, [](MisactorKind k) { return std::string(to_keyword(k)); });
    out += " reason=" + quote(e->reason) + "\n";
  }

  if (!model.policy.all_unknown()) {
    out += "policy accountability=";
    out += to_keyword(model.policy.accountability);
    out += " auditability=";
    out += to_keyword(model.policy.auditability);
    out += " alignment=";
    out += to_keyword(model.policy.alignment);
    out += '\n';
  }

  return out;
}

}  // namespace idpa
