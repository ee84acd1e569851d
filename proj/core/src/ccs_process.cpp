#include <algorithm>
#include <ostream>

#include "hmlkit/ccs.hpp"
#include "hmlkit/error.hpp"

namespace hmlkit::ccs {

Action Action::input(std::string name) {
  if (name.empty() || name == "tau") throw UsageError("invalid action name '" + name + "'");
  return Action{Kind::Name, std::move(name)};
}

Action Action::output(std::string name) {
  if (name.empty() || name == "tau") throw UsageError("invalid action name '" + name + "'");
  return Action{Kind::CoName, std::move(name)};
}

std::string Action::label() const {
  switch (kind) {
    case Kind::Name:
      return name;
    case Kind::CoName:
      return "'" + name;
    case Kind::Tau:
      return "tau";
  }
  return "tau";
}

std::optional<Action> Action::complement() const {
  switch (kind) {
    case Kind::Name:
      return Action{Kind::CoName, name};
    case Kind::CoName:
      return Action{Kind::Name, name};
    case Kind::Tau:
      return std::nullopt;
  }
  return std::nullopt;
}

struct Process::Node {
  ProcessKind kind;
  Action action;
  std::string name;
  std::vector<std::string> names;
  std::shared_ptr<const Node> left;  // continuation / restricted body
  std::shared_ptr<const Node> right;
  std::size_t hash;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 12) + (seed >> 4));
}

}  // namespace

Process::Process() : Process(nil()) {}

Process Process::nil() {
  static const auto node = std::make_shared<const Node>(
      Node{ProcessKind::Nil, Action::tau(), {}, {}, {}, {}, mix(0, 1)});
  return Process(node);
}

Process Process::prefix(Action action, Process continuation) {
  std::size_t h = mix(mix(2, static_cast<std::size_t>(action.kind)), std::hash<std::string>{}(action.name));
  h = mix(h, continuation.hash());
  return Process(std::make_shared<const Node>(
      Node{ProcessKind::Prefix, std::move(action), {}, {}, std::move(continuation.node_), {}, h}));
}

Process Process::sum(Process left, Process right) {
  const std::size_t h = mix(mix(3, left.hash()), right.hash());
  return Process(std::make_shared<const Node>(Node{ProcessKind::Sum, Action::tau(), {}, {},
                                                   std::move(left.node_),
                                                   std::move(right.node_), h}));
}

Process Process::par(Process left, Process right) {
  const std::size_t h = mix(mix(4, left.hash()), right.hash());
  return Process(std::make_shared<const Node>(Node{ProcessKind::Par, Action::tau(), {}, {},
                                                   std::move(left.node_),
                                                   std::move(right.node_), h}));
}

Process Process::restrict(Process body, std::vector<std::string> names) {
  if (names.empty()) throw UsageError("restriction needs at least one name");
  for (const std::string& n : names) {
    if (n.empty() || n == "tau" || n.front() == '\'') {
      throw UsageError("cannot restrict '" + n + "': only plain names can be restricted");
    }
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::size_t h = mix(5, body.hash());
  for (const std::string& n : names) h = mix(h, std::hash<std::string>{}(n));
  return Process(std::make_shared<const Node>(Node{ProcessKind::Restrict, Action::tau(), {},
                                                   std::move(names), std::move(body.node_), {},
                                                   h}));
}

Process Process::constant(std::string name) {
  if (name.empty()) throw UsageError("empty constant name");
  const std::size_t h = mix(6, std::hash<std::string>{}(name));
  return Process(std::make_shared<const Node>(
      Node{ProcessKind::Const, Action::tau(), std::move(name), {}, {}, {}, h}));
}

ProcessKind Process::kind() const noexcept { return node_->kind; }

const Action& Process::action() const {
  if (kind() != ProcessKind::Prefix) throw UsageError("action() on a non-prefix process");
  return node_->action;
}

Process Process::continuation() const {
  if (kind() != ProcessKind::Prefix) throw UsageError("continuation() on a non-prefix process");
  return Process(node_->left);
}

Process Process::left() const {
  if (kind() != ProcessKind::Sum && kind() != ProcessKind::Par) {
    throw UsageError("left() on a process that is not a sum or parallel composition");
  }
  return Process(node_->left);
}

Process Process::right() const {
  if (kind() != ProcessKind::Sum && kind() != ProcessKind::Par) {
    throw UsageError("right() on a process that is not a sum or parallel composition");
  }
  return Process(node_->right);
}

Process Process::body() const {
  if (kind() != ProcessKind::Restrict) throw UsageError("body() on a non-restriction process");
  return Process(node_->left);
}

const std::vector<std::string>& Process::restricted() const {
  if (kind() != ProcessKind::Restrict) throw UsageError("restricted() on a non-restriction process");
  return node_->names;
}

const std::string& Process::name() const {
  if (kind() != ProcessKind::Const) throw UsageError("name() on a non-constant process");
  return node_->name;
}

std::size_t Process::hash() const noexcept { return node_->hash; }

bool operator==(const Process& a, const Process& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Process& a, const Process& b) {
  const Process::Node& x = *a.node_;
  const Process::Node& y = *b.node_;
  if (&x == &y) return std::strong_ordering::equal;
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  switch (x.kind) {
    case ProcessKind::Nil:
      return std::strong_ordering::equal;
    case ProcessKind::Prefix:
      if (auto c = x.action <=> y.action; c != 0) return c;
      return Process(x.left) <=> Process(y.left);
    case ProcessKind::Sum:
    case ProcessKind::Par:
      if (auto c = Process(x.left) <=> Process(y.left); c != 0) return c;
      return Process(x.right) <=> Process(y.right);
    case ProcessKind::Restrict:
      if (auto c = x.names <=> y.names; c != 0) return c;
      return Process(x.left) <=> Process(y.left);
    case ProcessKind::Const:
      return x.name <=> y.name;
  }
  return std::strong_ordering::equal;
}

namespace {

enum Level { kSum = 0, kPar = 1, kRestrict = 2, kPrefix = 3 };

void print(std::string& out, const Process& p, Level context) {
  switch (p.kind()) {
    case ProcessKind::Nil:
      out += "0";
      return;
    case ProcessKind::Const:
      out += p.name();
      return;
    case ProcessKind::Prefix:
      out += p.action().label();
      out += ".";
      print(out, p.continuation(), kPrefix);
      return;
    case ProcessKind::Sum:
    case ProcessKind::Par: {
      const bool is_sum = p.kind() == ProcessKind::Sum;
      const Level own = is_sum ? kSum : kPar;
      const bool parens = context > own;
      if (parens) out += "(";
      print(out, p.left(), is_sum ? kPar : kRestrict);
      out += is_sum ? " + " : " | ";
      print(out, p.right(), own);
      if (parens) out += ")";
      return;
    }
    case ProcessKind::Restrict: {
      const bool parens = context > kRestrict;
      if (parens) out += "(";
      print(out, p.body(), kRestrict);
      out += " \\ {";
      for (std::size_t i = 0; i < p.restricted().size(); ++i) {
        if (i > 0) out += ", ";
        out += p.restricted()[i];
      }
      out += "}";
      if (parens) out += ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const Process& p) {
  std::string out;
  print(out, p, kSum);
  return out;
}

std::ostream& operator<<(std::ostream& out, const Process& p) { return out << to_string(p); }

}  // namespace hmlkit::ccs
