#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hmlkit/lts.hpp"

namespace hmlkit::ccs {

// A CCS action: a name a, its co-name 'a, or the silent action tau.
struct Action {
  enum class Kind : std::uint8_t { Name, CoName, Tau };

  Kind kind = Kind::Tau;
  std::string name;  // empty for tau

  static Action tau() { return Action{Kind::Tau, {}}; }
  static Action input(std::string name);   // a
  static Action output(std::string name);  // 'a

  // LTS label text: "a", "'a" or "tau".
  std::string label() const;
  // The complementary action; tau has none.
  std::optional<Action> complement() const;

  friend auto operator<=>(const Action&, const Action&) = default;
};

enum class ProcessKind : std::uint8_t { Nil, Prefix, Sum, Par, Restrict, Const };

/// An immutable CCS term with structural equality, a total structural order
/// and a cached structural hash.
class Process {
 public:
  Process();  // 0

  static Process nil();
  static Process prefix(Action action, Process continuation);
  static Process sum(Process left, Process right);
  static Process par(Process left, Process right);
  // Names are sorted and deduplicated. Throws UsageError on an empty set or
  // an empty/"tau" name.
  static Process restrict(Process body, std::vector<std::string> names);
  static Process constant(std::string name);

  ProcessKind kind() const noexcept;
  const Action& action() const;            // Prefix
  Process continuation() const;            // Prefix
  Process left() const;                    // Sum, Par
  Process right() const;                   // Sum, Par
  Process body() const;                    // Restrict
  const std::vector<std::string>& restricted() const;  // Restrict
  const std::string& name() const;         // Const

  std::size_t hash() const noexcept;

  friend bool operator==(const Process& a, const Process& b);
  friend std::strong_ordering operator<=>(const Process& a, const Process& b);

  struct Hash {
    std::size_t operator()(const Process& p) const noexcept { return p.hash(); }
  };

 private:
  struct Node;
  explicit Process(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// Recursive definitions A = P.
using CcsDefs = std::map<std::string, Process, std::less<>>;

struct CcsProgram {
  CcsDefs defs;
  std::vector<Process> roots;  // expression lines, in file order
};

/// Grammar, one definition or expression per line ('#' starts a comment):
///
///   line ::= Ident '=' P | P
///   P    ::= Q ('+' P)?                       choice
///   Q    ::= R ('|' Q)?                       parallel
///   R    ::= S ('\' '{' name (',' name)* '}')*  restriction
///   S    ::= act '.' S | '0' | Ident | '(' P ')'
///   act  ::= name | ''' name | 'tau'
///
/// Prefix binds tightest, then restriction, then '|', then '+'. An
/// identifier followed by '.' is an action; otherwise it names a constant.
/// Throws ParseError on malformed text, on a constant defined twice, on a
/// reference to an undefined constant and on an unguarded definition.
CcsProgram parse_ccs(std::string_view text);

/// Parses a single process expression and checks that all its constants are
/// defined in defs.
Process parse_process(std::string_view text, const CcsDefs& defs);

std::string to_string(const Process& p);
std::ostream& operator<<(std::ostream& out, const Process& p);

struct GuardViolation {
  std::string definition;         // the body being checked
  std::string constant;           // the unguarded occurrence
  std::vector<std::string> path;  // steps from the body root, e.g. "sum.right"

  std::string describe() const;
};

/// Every constant occurrence in every definition body must sit under an
/// action prefix. Reports the first violation in (definition, path) order.
std::optional<GuardViolation> check_guarded(const CcsDefs& defs);

// Names of constants used by p (or any definition) that defs does not define.
std::vector<std::string> unresolved_constants(const CcsDefs& defs, const Process& p);

/// One-step transitions of p under the structural operational semantics of
/// CCS (prefix, choice, interleaving, synchronisation on complementary
/// actions producing tau, restriction, constant unfolding). Sorted by
/// (action, successor), without duplicates. Throws UsageError on an
/// undefined constant or on unguarded recursion reached while unfolding.
std::vector<std::pair<Action, Process>> step(const CcsDefs& defs, const Process& p);

inline constexpr std::size_t kDefaultStateBudget = 10000;

/// The reachable fragment of the CCS transition system from some roots.
struct ProcessLts {
  ProcessLts(FiniteLts lts, std::vector<Process> processes, std::vector<StateId> roots);

  FiniteLts lts;
  std::vector<Process> processes;  // processes[id] is state id
  std::vector<StateId> roots;      // state of each root, in root order

  std::optional<StateId> find(const Process& p) const;

 private:
  std::unordered_map<Process, StateId, Process::Hash> index_;
};

/// Breadth-first exploration of step() from the roots. Processes are
/// identified up to structural equality only. Labels are the action labels
/// met in discovery order, plus "tau" if it was not met. Throws UsageError
/// for undefined constants or unguarded definitions and ResourceError once
/// more than max_states processes are discovered.
ProcessLts reachable_lts(const CcsDefs& defs, std::span<const Process> roots,
                         std::size_t max_states = kDefaultStateBudget);

}  // namespace hmlkit::ccs
