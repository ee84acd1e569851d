#include "hmlkit/aut.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "hmlkit/error.hpp"

namespace hmlkit {

namespace {

class LineCursor {
 public:
  LineCursor(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  void skip_space() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= line_.size();
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < line_.size() && line_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  void expect_word(std::string_view word) {
    skip_space();
    if (line_.substr(pos_, word.size()) != word) fail("expected '" + std::string(word) + "'");
    pos_ += word.size();
  }
  std::size_t number() {
    skip_space();
    std::size_t value = 0;
    const char* first = line_.data() + pos_;
    const char* last = line_.data() + line_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) fail("expected a non-negative integer");
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }
  std::string quoted() {
    expect('"');
    std::string out;
    while (pos_ < line_.size() && line_[pos_] != '"') {
      if (line_[pos_] == '\\' && pos_ + 1 < line_.size()) ++pos_;
      out.push_back(line_[pos_++]);
    }
    if (pos_ >= line_.size()) fail("unterminated label string");
    ++pos_;
    return out;
  }
  // Bare label: everything up to the last comma of the line.
  std::string bare_label() {
    skip_space();
    const std::size_t comma = line_.rfind(',');
    if (comma == std::string_view::npos || comma < pos_) fail("expected ', target)'");
    std::string_view text = line_.substr(pos_, comma - pos_);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
      text.remove_suffix(1);
    }
    if (text.empty()) fail("empty label");
    pos_ = comma;
    return std::string(text);
  }
  bool peek(char c) {
    skip_space();
    return pos_ < line_.size() && line_[pos_] == c;
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_no_, pos_ + 1);
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

std::string escape(const std::string& label) {
  std::string out;
  out.reserve(label.size());
  for (char c : label) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

FiniteLts read_aut(std::string_view text) {
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t initial = 0;
  std::size_t declared_transitions = 0;
  std::size_t num_states = 0;
  std::vector<std::string> labels;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::vector<NamedTransition> transitions;
  std::size_t header_line = 0;

  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    LineCursor cur(line, line_no);
    if (cur.at_end()) continue;
    if (!have_header) {
      cur.expect_word("des");
      cur.expect('(');
      initial = cur.number();
      cur.expect(',');
      declared_transitions = cur.number();
      cur.expect(',');
      num_states = cur.number();
      cur.expect(')');
      if (!cur.at_end()) cur.fail("trailing characters after header");
      have_header = true;
      header_line = line_no;
      continue;
    }
    cur.expect('(');
    NamedTransition t;
    t.source = cur.number();
    cur.expect(',');
    t.label = cur.peek('"') ? cur.quoted() : cur.bare_label();
    cur.expect(',');
    t.target = cur.number();
    cur.expect(')');
    if (!cur.at_end()) cur.fail("trailing characters after transition");
    if (t.source >= num_states || t.target >= num_states) {
      throw ParseError("state index out of range for " + std::to_string(num_states) + " states",
                       line_no, 1);
    }
    if (seen.emplace(t.label, labels.size()).second) labels.push_back(t.label);
    transitions.push_back(std::move(t));
  }
  if (!have_header) throw ParseError("missing 'des (...)' header", line_no + 1, 1);
  if (transitions.size() != declared_transitions) {
    throw ParseError("header declares " + std::to_string(declared_transitions) +
                         " transitions but " + std::to_string(transitions.size()) +
                         " were listed",
                     header_line, 1);
  }
  if (num_states == 0 ? initial != 0 : initial >= num_states) {
    throw ParseError("initial state out of range", header_line, 1);
  }
  return FiniteLts::build(num_states, std::move(labels), transitions,
                          StateId(static_cast<std::uint32_t>(initial)));
}

FiniteLts load_aut(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_aut(buffer.str());
}

std::string write_aut(const FiniteLts& lts) {
  std::ostringstream out;
  out << "des (" << lts.initial_state().value << ", " << lts.num_transitions() << ", "
      << lts.num_states() << ")\n";
  for (const Transition& t : lts.transitions()) {
    out << "(" << t.source.value << ", \"" << escape(lts.label_name(t.label)) << "\", "
        << t.target.value << ")\n";
  }
  return out.str();
}

void save_aut(const std::filesystem::path& path, const FiniteLts& lts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << write_aut(lts);
  if (!out) throw UsageError("failed writing '" + path.string() + "'");
}

}  // namespace hmlkit
