#include <cctype>
#include <set>

#include "hmlkit/ccs.hpp"
#include "hmlkit/error.hpp"

namespace hmlkit::ccs {

namespace {

constexpr std::size_t kMaxProcessNesting = 10000;

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class ProcessParser {
 public:
  ProcessParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  // Definition "A = P" if the line starts with an identifier followed by
  // '='; nullopt (and nothing consumed) otherwise.
  std::optional<std::string> definition_head() {
    const std::size_t saved = pos_;
    skip_space();
    if (pos_ < text_.size() && ident_start(text_[pos_])) {
      std::string name = identifier();
      if (accept('=')) return name;
    }
    pos_ = saved;
    return std::nullopt;
  }

  Process parse_rest() {
    Process p = choice();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, pos_ + 1);
  }

 private:
  Process choice() {
    Process left = parallel();
    if (!accept('+')) return left;
    Nesting guard(*this);
    return Process::sum(std::move(left), choice());
  }

  Process parallel() {
    Process left = restriction();
    if (!accept('|')) return left;
    Nesting guard(*this);
    return Process::par(std::move(left), parallel());
  }

  Process restriction() {
    Process p = prefixed();
    while (accept('\\')) {
      expect('{');
      std::vector<std::string> names;
      do {
        skip_space();
        if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected a name to restrict");
        std::string n = identifier();
        if (n == "tau") fail("tau cannot be restricted");
        names.push_back(std::move(n));
      } while (accept(','));
      expect('}');
      p = Process::restrict(std::move(p), std::move(names));
    }
    return p;
  }

  Process prefixed() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected a process");
    Nesting guard(*this);
    const char c = text_[pos_];
    if (c == '0') {
      ++pos_;
      return Process::nil();
    }
    if (c == '(') {
      ++pos_;
      Process inner = choice();
      expect(')');
      return inner;
    }
    if (c == '\'') {
      ++pos_;
      if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected a name after '''");
      std::string name = identifier();
      if (name == "tau") fail("tau has no co-action");
      expect('.');
      return Process::prefix(Action::output(std::move(name)), prefixed());
    }
    if (ident_start(c)) {
      const std::size_t start = pos_;
      std::string name = identifier();
      if (accept('.')) {
        Action a = name == "tau" ? Action::tau() : Action::input(std::move(name));
        return Process::prefix(std::move(a), prefixed());
      }
      if (name == "tau") {
        pos_ = start;
        fail("'tau' must be followed by '.'");
      }
      return Process::constant(std::move(name));
    }
    fail("expected '0', an action prefix, a constant or '('");
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  struct Nesting {
    explicit Nesting(ProcessParser& p) : parser(p) {
      if (++parser.depth_ > kMaxProcessNesting) parser.fail("process nested too deeply");
    }
    ~Nesting() { --parser.depth_; }
    Nesting(const Nesting&) = delete;
    Nesting& operator=(const Nesting&) = delete;
    ProcessParser& parser;
  };

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
};

std::string_view strip_comment(std::string_view line) {
  const std::size_t hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

void collect_constants(const Process& p, std::set<std::string>& out) {
  switch (p.kind()) {
    case ProcessKind::Nil:
      return;
    case ProcessKind::Const:
      out.insert(p.name());
      return;
    case ProcessKind::Prefix:
      collect_constants(p.continuation(), out);
      return;
    case ProcessKind::Sum:
    case ProcessKind::Par:
      collect_constants(p.left(), out);
      collect_constants(p.right(), out);
      return;
    case ProcessKind::Restrict:
      collect_constants(p.body(), out);
      return;
  }
}

void find_unguarded(const std::string& definition, const Process& p,
                    std::vector<std::string>& path, std::optional<GuardViolation>& found) {
  if (found) return;
  switch (p.kind()) {
    case ProcessKind::Nil:
    case ProcessKind::Prefix:
      return;
    case ProcessKind::Const:
      found = GuardViolation{definition, p.name(), path};
      return;
    case ProcessKind::Sum:
    case ProcessKind::Par: {
      const std::string op = p.kind() == ProcessKind::Sum ? "sum" : "par";
      path.push_back(op + ".left");
      find_unguarded(definition, p.left(), path, found);
      path.back() = op + ".right";
      find_unguarded(definition, p.right(), path, found);
      path.pop_back();
      return;
    }
    case ProcessKind::Restrict:
      path.push_back("restrict");
      find_unguarded(definition, p.body(), path, found);
      path.pop_back();
      return;
  }
}

}  // namespace

std::string GuardViolation::describe() const {
  std::string where;
  for (const std::string& step : path) where += (where.empty() ? "" : "/") + step;
  return "constant " + constant + " occurs unguarded in the definition of " + definition +
         (where.empty() ? " (at the root)" : " (at " + where + ")");
}

std::optional<GuardViolation> check_guarded(const CcsDefs& defs) {
  std::optional<GuardViolation> found;
  for (const auto& [name, body] : defs) {
    std::vector<std::string> path;
    find_unguarded(name, body, path, found);
    if (found) break;
  }
  return found;
}

std::vector<std::string> unresolved_constants(const CcsDefs& defs, const Process& p) {
  std::set<std::string> used;
  collect_constants(p, used);
  for (const auto& [name, body] : defs) collect_constants(body, used);
  std::vector<std::string> missing;
  for (const std::string& name : used) {
    if (!defs.contains(name)) missing.push_back(name);
  }
  return missing;
}

CcsProgram parse_ccs(std::string_view text) {
  CcsProgram program;
  std::map<std::string, std::size_t> def_lines;
  std::vector<std::size_t> root_lines;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    line = strip_comment(line);
    if (line.find_first_not_of(" \t\r\v\f") == std::string_view::npos) continue;

    ProcessParser parser(line, line_no);
    if (auto name = parser.definition_head()) {
      if (*name == "tau") parser.fail("'tau' cannot be defined");
      if (program.defs.contains(*name)) parser.fail("constant " + *name + " is defined twice");
      program.defs.emplace(*name, parser.parse_rest());
      def_lines.emplace(*name, line_no);
    } else {
      program.roots.push_back(parser.parse_rest());
      root_lines.push_back(line_no);
    }
  }

  for (const auto& [name, body] : program.defs) {
    if (auto missing = unresolved_constants(program.defs, body); !missing.empty()) {
      std::set<std::string> in_body;
      collect_constants(body, in_body);
      for (const std::string& m : missing) {
        if (in_body.contains(m)) {
          throw ParseError("undefined constant " + m + " in the definition of " + name,
                           def_lines[name], 1);
        }
      }
    }
  }
  for (std::size_t i = 0; i < program.roots.size(); ++i) {
    if (auto missing = unresolved_constants(program.defs, program.roots[i]); !missing.empty()) {
      throw ParseError("undefined constant " + missing.front(), root_lines[i], 1);
    }
  }
  if (auto violation = check_guarded(program.defs)) {
    throw ParseError(violation->describe(), def_lines[violation->definition], 1);
  }
  return program;
}

Process parse_process(std::string_view text, const CcsDefs& defs) {
  ProcessParser parser(text, 1);
  Process p = parser.parse_rest();
  if (auto missing = unresolved_constants(defs, p); !missing.empty()) {
    throw ParseError("undefined constant " + missing.front(), 1, 1);
  }
  return p;
}

}  // namespace hmlkit::ccs
