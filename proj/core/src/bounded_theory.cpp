#include <bitset>
#include <string>

#include "hmlkit/equivalence.hpp"

namespace hmlkit {

namespace {

constexpr std::size_t kMaskSpace = std::size_t{1} << BoundedTheory::kMaxStates;

// Denotations reachable within one (size, depth) bound, each paired with
// the first formula that produced it.
struct Layer {
  std::bitset<kMaskSpace> seen;
  std::vector<std::pair<std::uint32_t, Formula>> entries;

  void add(std::uint32_t mask, const Formula& f) {
    if (seen.test(mask)) return;
    seen.set(mask);
    entries.emplace_back(mask, f);
  }
  template <typename Make>
  void add_lazy(std::uint32_t mask, Make make) {
    if (!seen.test(mask)) add(mask, make());
  }
  void absorb(const Layer& other) {
    for (const auto& [mask, f] : other.entries) add(mask, f);
  }
};

void check_cap(std::size_t value, std::size_t cap, const char* what) {
  if (value > cap) {
    throw ResourceError(std::string("bounded theory enumeration refused: ") + what + " " +
                        std::to_string(value) + " exceeds the cap of " + std::to_string(cap));
  }
}

}  // namespace

BoundedTheory::BoundedTheory(const FiniteLts& lts, std::size_t max_size, std::size_t max_depth)
    : num_states_(lts.num_states()) {
  check_cap(lts.num_states(), kMaxStates, "state count");
  check_cap(lts.num_labels(), kMaxLabels, "label count");
  check_cap(max_size, kMaxSize, "formula size");
  check_cap(max_depth, kMaxDepth, "modal depth");
  if (max_size == 0) return;

  const std::size_t n = lts.num_states();
  const std::uint32_t all = n == 0 ? 0 : static_cast<std::uint32_t>((std::size_t{1} << n) - 1);

  // successors[label][s] is the mask of label-successors of s.
  std::vector<std::vector<std::uint32_t>> successors(lts.num_labels(),
                                                     std::vector<std::uint32_t>(n, 0));
  for (const Transition& t : lts.transitions()) {
    successors[t.label.value][t.source.value] |= std::uint32_t{1} << t.target.value;
  }
  auto diamond_mask = [&](std::size_t label, std::uint32_t body) {
    std::uint32_t out = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if ((successors[label][s] & body) != 0) out |= std::uint32_t{1} << s;
    }
    return out;
  };
  auto box_mask = [&](std::size_t label, std::uint32_t body) {
    std::uint32_t out = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if ((successors[label][s] & ~body) == 0) out |= std::uint32_t{1} << s;
    }
    return out;
  };

  // layers[size][depth]: formulas with at most `size` nodes and modal depth
  // at most `depth`. A formula's denotation only depends on its children's,
  // so keeping one representative per denotation loses nothing.
  std::vector<std::vector<Layer>> layers(max_size + 1, std::vector<Layer>(max_depth + 1));
  for (std::size_t size = 1; size <= max_size; ++size) {
    for (std::size_t depth = 0; depth <= max_depth; ++depth) {
      Layer& layer = layers[size][depth];
      if (size > 1) layer.absorb(layers[size - 1][depth]);
      if (depth > 0) layer.absorb(layers[size][depth - 1]);
      layer.add(all, Formula::tt());
      layer.add(0, Formula::ff());
      if (size >= 2 && depth >= 1) {
        for (const auto& [mask, body] : layers[size - 1][depth - 1].entries) {
          for (std::size_t l = 0; l < lts.num_labels(); ++l) {
            const std::string& name = lts.label_name(LabelId(static_cast<std::uint32_t>(l)));
            layer.add_lazy(diamond_mask(l, mask), [&] { return Formula::diamond(name, body); });
            layer.add_lazy(box_mask(l, mask), [&] { return Formula::box(name, body); });
          }
        }
      }
      // Conjunction and disjunction commute, so the smaller operand goes left.
      for (std::size_t left = 1; left + left <= size - 1; ++left) {
        const Layer& lhs = layers[left][depth];
        const Layer& rhs = layers[size - 1 - left][depth];
        for (const auto& [a, fa] : lhs.entries) {
          for (const auto& [b, fb] : rhs.entries) {
            layer.add_lazy(a & b, [&] { return Formula::conj(fa, fb); });
            layer.add_lazy(a | b, [&] { return Formula::disj(fa, fb); });
          }
        }
      }
    }
  }
  for (auto& [mask, f] : layers[max_size][max_depth].entries) {
    entries_.push_back(Entry{mask, std::move(f)});
  }
}

std::optional<Formula> BoundedTheory::distinguisher(StateId s1, StateId s2) const {
  if (s1.value >= num_states_ || s2.value >= num_states_) {
    throw UsageError("bounded theory: state out of range");
  }
  for (const Entry& e : entries_) {
    const bool first = (e.mask >> s1.value) & 1U;
    const bool second = (e.mask >> s2.value) & 1U;
    if (first && !second) return e.formula;
    if (!first && second) return neg(e.formula);
  }
  return std::nullopt;
}

bool theory_eq_bounded(const FiniteLts& lts, StateId s1, StateId s2, std::size_t max_size,
                       std::size_t max_depth) {
  return !BoundedTheory(lts, max_size, max_depth).distinguisher(s1, s2).has_value();
}

}  // namespace hmlkit
