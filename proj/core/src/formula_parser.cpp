#include <cctype>
#include <string>

#include "hmlkit/error.hpp"
#include "hmlkit/formula.hpp"

namespace hmlkit {

namespace {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  Formula parse_all() {
    Formula f = disjunction();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  // disjunction := conjunction ('|' disjunction)?
  Formula disjunction() {
    Formula left = conjunction();
    if (!accept('|')) return left;
    Nesting guard(*this);
    return Formula::disj(std::move(left), disjunction());
  }

  // conjunction := unary ('&' conjunction)?
  Formula conjunction() {
    Formula left = unary();
    if (!accept('&')) return left;
    Nesting guard(*this);
    return Formula::conj(std::move(left), conjunction());
  }

  Formula unary() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected a formula");
    Nesting guard(*this);
    const char c = text_[pos_];
    if (c == '<' || c == '[') {
      ++pos_;
      std::string label = modal_label();
      expect(c == '<' ? '>' : ']');
      Formula body = unary();
      return c == '<' ? Formula::diamond(std::move(label), std::move(body))
                      : Formula::box(std::move(label), std::move(body));
    }
    if (c == '(') {
      ++pos_;
      Formula inner = disjunction();
      expect(')');
      return inner;
    }
    if (keyword("tt")) return Formula::tt();
    if (keyword("ff")) return Formula::ff();
    fail("expected 'tt', 'ff', '<', '[' or '('");
  }

  std::string modal_label() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '"') return quoted();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_bare_label(text_.substr(pos_, 1))) ++pos_;
    if (pos_ == start) fail("expected a label");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string quoted() {
    const std::size_t open = pos_++;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out.push_back(text_[pos_++]);
    }
    if (pos_ >= text_.size()) {
      pos_ = open;
      fail("unterminated quoted label");
    }
    ++pos_;
    if (out.empty()) fail("empty label");
    return out;
  }

  bool keyword(std::string_view word) {
    if (text_.substr(pos_, word.size()) != word) return false;
    const std::size_t end = pos_ + word.size();
    if (end < text_.size()) {
      const unsigned char next = static_cast<unsigned char>(text_[end]);
      if (std::isalnum(next) || next == '_') return false;
    }
    pos_ = end;
    return true;
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

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, pos_ + 1);
  }

  struct Nesting {
    explicit Nesting(FormulaParser& p) : parser(p) {
      if (++parser.depth_ > kMaxFormulaNesting) {
        parser.fail("formula nested deeper than " + std::to_string(kMaxFormulaNesting));
      }
    }
    ~Nesting() { --parser.depth_; }
    Nesting(const Nesting&) = delete;
    Nesting& operator=(const Nesting&) = delete;
    FormulaParser& parser;
  };

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
};

// Cuts the line at the first '#' that is not inside a quoted label.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted && c == '\\') {
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (c == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text, 1).parse_all(); }

std::vector<Formula> parse_formula_list(std::string_view text) {
  std::vector<Formula> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    line = strip_comment(line);
    if (line.find_first_not_of(" \t\r\v\f") == std::string_view::npos) continue;
    out.push_back(FormulaParser(line, line_no).parse_all());
  }
  return out;
}

}  // namespace hmlkit
