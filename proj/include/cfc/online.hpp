#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cfc/engine.hpp"

namespace cfc {

// Insertion-only greedy for nested instances (every two intervals are
// disjoint or one contains the other). Labels: 0 is the dummy, 1, 2, ...
// are real colors. An interval inside another one gets 0; otherwise it gets
// the smallest label >= 1 that keeps the coloring conflict-free. Nothing is
// ever recolored.
class GreedyNested {
 public:
  GreedyNested();
  ~GreedyNested();
  GreedyNested(GreedyNested&&) noexcept;
  GreedyNested& operator=(GreedyNested&&) noexcept;

  // Returns the label given to iv. Throws InputError if iv would break
  // nestedness or reuses a live id.
  int insert(const Interval& iv);

  bool would_stay_nested(const Interval& iv) const;

  int label_of(IntervalId id) const;
  std::size_t size() const;
  // Number of distinct labels >= 1 handed out so far.
  int colors_used() const { return max_label_; }
  // Intervals covered by each interval at the moment it got its label.
  std::size_t covered_at_assignment(IntervalId id) const;

 private:
  struct Node;
  using Siblings = std::map<std::pair<double, IntervalId>, Node*>;

  // Finds where iv goes: the sibling map it joins, the node containing it
  // (null for a new root), and the siblings it will adopt.
  struct Placement {
    Siblings* level = nullptr;
    Node* parent = nullptr;
    Node* root = nullptr;  // top-level interval above iv, if any
    std::vector<Node*> ancestors;  // every interval containing iv, outermost first
    std::vector<Node*> adopted;
  };
  Placement place(const Interval& iv) const;
  int smallest_label(const std::vector<Node*>& adopted) const;

  std::vector<std::unique_ptr<Node>> nodes_;
  std::unordered_map<IntervalId, Node*> by_id_;
  std::unique_ptr<Siblings> roots_;
  int max_label_ = 0;
};

// The lower-bound instance [-1,1], [-2,2], ..., [-n,n] in insertion order,
// with ids 1..n. Throws ConfigError for n < 1.
std::vector<Interval> nested_lowerbound_instance(int n);

// Engine adapter: label c >= 1 becomes Palette(0, c), label 0 the dummy.
class GreedyNestedEngine final : public EngineBase {
 public:
  std::string name() const override { return "greedy-nested"; }
  UpdateResult insert(const Interval& iv) override;
  UpdateResult erase(IntervalId id) override;
  std::optional<int> declared_recolor_budget() const override { return 0; }

  const GreedyNested& greedy() const { return greedy_; }

 private:
  GreedyNested greedy_;
};

}  // namespace cfc
