#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "cfc/btree_layout.hpp"
#include "cfc/engine.hpp"
#include "cfc/node_coloring.hpp"

namespace cfc {

// General engine over an unbounded universe. The B-tree stores the 2n
// interval endpoints as keys; each interval lives at the highest node that
// holds a key it contains and the node's extremes are chain-colored with
// the two colors of the node's level (levels count up from the leaves).
//
// FixedT keeps the minimum degree constant. Epsilon rebuilds the whole tree
// with t = max(2, round(n^eps)) whenever n leaves [n_last/2, 2 n_last].
class DynamicEngine final : public EngineBase {
 public:
  enum class Mode { FixedT, Epsilon };

  // A key is an endpoint: (coordinate, owner id, 0 for left / 1 for right).
  struct Key {
    double coord = 0.0;
    IntervalId id = 0;
    int side = 0;

    friend auto operator<=>(const Key&, const Key&) = default;
    friend bool operator==(const Key&, const Key&) = default;
  };

  // One structural step of an update: a key insertion or deletion, the
  // association or removal of an interval, or a global rebuild.
  struct Step {
    std::string kind;
    std::vector<std::string> primitives;  // split, merge, rotate, swap, leaf
    std::vector<std::uint64_t> nodes;     // uids of every node touched
  };

  struct Counters {
    std::uint64_t splits = 0;
    std::uint64_t merges = 0;
    std::uint64_t rotations = 0;
    std::uint64_t swaps = 0;
    std::uint64_t rebuilds = 0;
  };

  static DynamicEngine fixed(int t);
  static DynamicEngine epsilon(double eps);

  DynamicEngine(const DynamicEngine&) = delete;
  DynamicEngine& operator=(const DynamicEngine&) = delete;
  DynamicEngine(DynamicEngine&&) noexcept;
  DynamicEngine& operator=(DynamicEngine&&) noexcept;
  ~DynamicEngine() override;

  std::string name() const override;
  UpdateResult insert(const Interval& iv) override;
  UpdateResult erase(IntervalId id) override;

  Mode mode() const { return mode_; }
  int t() const { return t_; }
  double eps() const { return eps_; }
  std::size_t n_last() const { return n_last_; }
  int height() const;
  int max_height_seen() const { return max_height_; }
  std::size_t node_count() const;
  std::size_t key_count() const;
  const Counters& counters() const { return counters_; }

  const std::vector<Step>& last_steps() const { return last_steps_; }
  // Uids of every node touched by the last update.
  std::set<std::uint64_t> last_touched_nodes() const;
  // Uid of the node currently holding the interval.
  std::uint64_t node_of(IntervalId id) const;

  // Checks B-tree shape and order, key coverage, interval placement,
  // extremes, and the per-level coloring rules (A.1)-(A.3).
  std::optional<std::string> audit() const;

 private:
  struct Node;

  DynamicEngine(Mode mode, int t, double eps);

  Node* make_node(int level);
  void touch(Node* n);
  void forget(Node* n);
  void finalize(const std::string& kind);

  void insert_key(const Key& k);
  void insert_nonfull(Node* x, const Key& k);
  void split_child(Node* x, std::size_t i);
  void delete_key(const Key& k);
  void delete_from(Node* x, const Key& k);
  void merge_children(Node* x, std::size_t i);

  struct Located {
    Node* node = nullptr;
    std::size_t slot = 0;
  };
  Located locate(const Interval& iv) const;

  void rebuild();
  bool needs_rebuild() const;
  std::unique_ptr<Node> build(const LayoutNode& layout, const std::vector<Key>& keys);

  Mode mode_;
  int t_;
  double eps_;
  std::size_t n_last_ = 0;
  int max_height_ = 0;
  std::uint64_t next_uid_ = 0;
  std::unique_ptr<Node> root_;
  std::unordered_map<IntervalId, Node*> home_;
  Counters counters_;

  // Per-step scratch. Extremes from before the step are kept so that
  // intervals losing that status can be demoted at the end.
  std::map<std::uint64_t, Node*> touched_;
  std::set<IntervalId> pending_;
  std::set<IntervalId> old_extremes_;
  std::vector<std::string> primitives_;
  std::set<std::uint64_t> step_nodes_;
  std::vector<Step> last_steps_;
};

}  // namespace cfc
