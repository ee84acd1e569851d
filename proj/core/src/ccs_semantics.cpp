#include <algorithm>
#include <deque>

#include "hmlkit/ccs.hpp"
#include "hmlkit/error.hpp"

namespace hmlkit::ccs {

namespace {

using Moves = std::vector<std::pair<Action, Process>>;

bool blocked(const Action& a, const std::vector<std::string>& names) {
  return a.kind != Action::Kind::Tau && std::binary_search(names.begin(), names.end(), a.name);
}

// `unfolding` holds the constants entered since the last prefix; meeting
// one of them again means the recursion is unguarded.
void collect(const CcsDefs& defs, const Process& p, std::vector<std::string>& unfolding,
             Moves& out) {
  switch (p.kind()) {
    case ProcessKind::Nil:
      return;
    case ProcessKind::Prefix:
      out.emplace_back(p.action(), p.continuation());
      return;
    case ProcessKind::Sum:
      collect(defs, p.left(), unfolding, out);
      collect(defs, p.right(), unfolding, out);
      return;
    case ProcessKind::Par: {
      Moves left;
      Moves right;
      collect(defs, p.left(), unfolding, left);
      collect(defs, p.right(), unfolding, right);
      const Process l = p.left();
      const Process r = p.right();
      for (const auto& [a, l2] : left) out.emplace_back(a, Process::par(l2, r));
      for (const auto& [a, r2] : right) out.emplace_back(a, Process::par(l, r2));
      for (const auto& [a, l2] : left) {
        const auto co = a.complement();
        if (!co) continue;
        for (const auto& [b, r2] : right) {
          if (b == *co) out.emplace_back(Action::tau(), Process::par(l2, r2));
        }
      }
      return;
    }
    case ProcessKind::Restrict: {
      Moves inner;
      collect(defs, p.body(), unfolding, inner);
      for (auto& [a, p2] : inner) {
        if (!blocked(a, p.restricted())) {
          out.emplace_back(std::move(a), Process::restrict(std::move(p2), p.restricted()));
        }
      }
      return;
    }
    case ProcessKind::Const: {
      auto it = defs.find(p.name());
      if (it == defs.end()) throw UsageError("undefined constant " + p.name());
      if (std::find(unfolding.begin(), unfolding.end(), p.name()) != unfolding.end()) {
        throw UsageError("unguarded recursion through constant " + p.name());
      }
      unfolding.push_back(p.name());
      collect(defs, it->second, unfolding, out);
      unfolding.pop_back();
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<Action, Process>> step(const CcsDefs& defs, const Process& p) {
  Moves out;
  std::vector<std::string> unfolding;
  collect(defs, p, unfolding, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ProcessLts::ProcessLts(FiniteLts lts_in, std::vector<Process> processes_in,
                       std::vector<StateId> roots_in)
    : lts(std::move(lts_in)), processes(std::move(processes_in)), roots(std::move(roots_in)) {
  if (processes.size() != lts.num_states()) {
    throw UsageError("process table does not match the LTS state count");
  }
  for (std::size_t i = 0; i < processes.size(); ++i) {
    index_.emplace(processes[i], StateId(static_cast<std::uint32_t>(i)));
  }
}

std::optional<StateId> ProcessLts::find(const Process& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ProcessLts reachable_lts(const CcsDefs& defs, std::span<const Process> roots,
                         std::size_t max_states) {
  if (auto violation = check_guarded(defs)) throw UsageError(violation->describe());
  for (const Process& r : roots) {
    if (auto missing = unresolved_constants(defs, r); !missing.empty()) {
      throw UsageError("undefined constant " + missing.front());
    }
  }

  std::unordered_map<Process, StateId, Process::Hash> ids;
  std::vector<Process> processes;
  std::deque<StateId> frontier;
  auto intern = [&](const Process& p) {
    auto [it, inserted] = ids.emplace(p, StateId(static_cast<std::uint32_t>(processes.size())));
    if (inserted) {
      if (processes.size() >= max_states) {
        throw ResourceError("state budget of " + std::to_string(max_states) +
                            " exceeded with " + std::to_string(frontier.size()) +
                            " processes still unexplored");
      }
      processes.push_back(p);
      frontier.push_back(it->second);
    }
    return it->second;
  };

  std::vector<StateId> root_ids;
  for (const Process& r : roots) root_ids.push_back(intern(r));

  std::vector<std::string> labels;
  std::map<std::string, std::uint32_t, std::less<>> label_ids;
  auto label_of = [&](const Action& a) {
    std::string text = a.label();
    auto [it, inserted] = label_ids.emplace(text, static_cast<std::uint32_t>(labels.size()));
    if (inserted) labels.push_back(std::move(text));
    return LabelId(it->second);
  };

  std::vector<Transition> transitions;
  while (!frontier.empty()) {
    const StateId source = frontier.front();
    frontier.pop_front();
    // Copy: intern() may grow `processes`.
    const Process current = processes[source.value];
    for (const auto& [action, next] : step(defs, current)) {
      const LabelId label = label_of(action);
      transitions.push_back(Transition{source, label, intern(next)});
    }
  }
  label_of(Action::tau());

  const std::size_t n = processes.size();
  const StateId initial = root_ids.empty() ? StateId{0} : root_ids.front();
  return ProcessLts(FiniteLts(n, std::move(labels), std::move(transitions), initial),
                    std::move(processes), std::move(root_ids));
}

}  // namespace hmlkit::ccs
