#include "cfc/online.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <set>

namespace cfc {

struct GreedyNested::Node {
  Interval iv;
  int label = 0;
  std::size_t covered = 0;
  std::size_t size = 1;  // intervals in this subtree, itself included
  // Roots only: distinct (labels seen once, labels seen more) bit pairs
  // over the paths from this root down to every region below it.
  std::set<std::pair<std::uint64_t, std::uint64_t>> states;
  Siblings children;
};

GreedyNested::GreedyNested() : roots_(std::make_unique<Siblings>()) {}
GreedyNested::~GreedyNested() = default;
GreedyNested::GreedyNested(GreedyNested&&) noexcept = default;
GreedyNested& GreedyNested::operator=(GreedyNested&&) noexcept = default;

std::size_t GreedyNested::size() const { return by_id_.size(); }

int GreedyNested::label_of(IntervalId id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw InputError("interval " + std::to_string(id) + " is not live");
  return it->second->label;
}

std::size_t GreedyNested::covered_at_assignment(IntervalId id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw InputError("interval " + std::to_string(id) + " is not live");
  return it->second->covered;
}

GreedyNested::Placement GreedyNested::place(const Interval& iv) const {
  Placement out;
  out.level = roots_.get();
  for (;;) {
    // Siblings are pairwise disjoint, so both their left and right
    // endpoints increase along the map. Walk back from the last sibling
    // starting at or before iv.right while it still reaches iv.left.
    std::vector<Node*> overlapping;
    auto it = out.level->upper_bound({iv.right, std::numeric_limits<IntervalId>::max()});
    while (it != out.level->begin()) {
      --it;
      if (it->second->iv.right < iv.left) break;
      overlapping.push_back(it->second);
    }
    Node* container = nullptr;
    for (Node* n : overlapping) {
      if (n->iv.contains(iv)) container = n;
    }
    if (container) {
      if (!out.parent) out.root = container;
      out.parent = container;
      out.ancestors.push_back(container);
      out.level = &container->children;
      continue;
    }
    for (Node* n : overlapping) {
      if (!iv.contains(n->iv)) {
        throw InputError("interval " + std::to_string(iv.id) + " partially overlaps interval " +
                         std::to_string(n->iv.id) + "; the instance would not be nested");
      }
    }
    std::reverse(overlapping.begin(), overlapping.end());
    out.adopted = std::move(overlapping);
    return out;
  }
}

bool GreedyNested::would_stay_nested(const Interval& iv) const {
  try {
    place(iv);
    return true;
  } catch (const InputError&) {
    return false;
  }
}

// A point below a root sees the labels on one path from the root down to
// the deepest interval containing it. Per path only two sets matter: labels
// seen once and labels seen more than once. Each root keeps the distinct
// (once, more) pairs of its paths. Dummy insertions never change that set:
// the new dummy's own region repeats a state its parent already had.
//
// A new root must avoid label u exactly when some path below it has u as
// its only unique label.
int GreedyNested::smallest_label(const std::vector<Node*>& adopted) const {
  std::set<int> forbidden;
  for (const Node* r : adopted) {
    for (const auto& [once, more] : r->states) {
      if (once != 0 && (once & (once - 1)) == 0) forbidden.insert(std::countr_zero(once));
      if (once == 0) throw InvariantError("greedy state already has a point without a unique color");
    }
  }
  int c = 1;
  while (forbidden.count(c)) ++c;
  return c;
}

int GreedyNested::insert(const Interval& raw) {
  const Interval iv = Interval::make(raw.id, raw.left, raw.right);
  if (by_id_.count(iv.id)) throw InputError("interval " + std::to_string(iv.id) + " is already live");
  Placement p = place(iv);

  auto node = std::make_unique<Node>();
  node->iv = iv;
  if (p.parent) {
    node->label = 0;
    for (const Node* n : p.adopted) node->covered += n->size;
    node->size = node->covered + 1;
    for (Node* a : p.ancestors) a->size += 1;
  } else {
    node->label = smallest_label(p.adopted);
    const int i = node->label;
    if (i >= 64) throw InvariantError("greedy label exceeds 63");
    for (const Node* n : p.adopted) node->covered += n->size;
    node->size = node->covered + 1;
    // Color i only goes to intervals covering at least 2^(i-1) - 1 others.
    if (node->covered + 1 < (std::size_t{1} << (i - 1))) {
      throw InvariantError("greedy gave color " + std::to_string(i) + " to an interval covering only " +
                           std::to_string(node->covered) + " others");
    }
    const std::uint64_t bit = std::uint64_t{1} << i;
    node->states.emplace(bit, 0);
    for (Node* n : p.adopted) {
      for (auto [once, more] : n->states) {
        if (once & bit) {
          once &= ~bit;
          more |= bit;
        } else if (!(more & bit)) {
          once |= bit;
        }
        node->states.emplace(once, more);
      }
      n->states.clear();
    }
    max_label_ = std::max(max_label_, node->label);
  }

  for (Node* n : p.adopted) {
    p.level->erase({n->iv.left, n->iv.id});
    node->children.emplace(std::make_pair(n->iv.left, n->iv.id), n);
  }
  p.level->emplace(std::make_pair(iv.left, iv.id), node.get());
  Node* raw_node = node.get();
  by_id_[iv.id] = raw_node;
  nodes_.push_back(std::move(node));
  return raw_node->label;
}

std::vector<Interval> nested_lowerbound_instance(int n) {
  if (n < 1) throw ConfigError("nested lower-bound instance needs n >= 1");
  std::vector<Interval> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) out.push_back(Interval::make(i, -i, i));
  return out;
}

UpdateResult GreedyNestedEngine::insert(const Interval& iv) {
  require_fresh(iv);
  int label = greedy_.insert(iv);
  begin_update();
  live_.emplace(iv.id, iv);
  state_.assign(iv.id, label == 0 ? Color::dummy() : Color::palette(0, label));
  return finish_update();
}

UpdateResult GreedyNestedEngine::erase(IntervalId) {
  throw ConfigError("greedy-nested is insertion-only");
}

}  // namespace cfc
