#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cfc/core.hpp"

namespace cfc {

struct UpdateResult {
  std::vector<RecolorEvent> events;  // every color change, initial colors included
  int recolorings = 0;               // changes to already-colored intervals
  int rebuild_recolorings = 0;       // subset caused by a global rebuild

  int total() const { return recolorings + rebuild_recolorings; }
};

// The update contract every coloring strategy implements. Adversaries,
// benchmarks and the CLI only talk to engines through this interface.
class Engine {
 public:
  virtual ~Engine() = default;

  virtual std::string name() const = 0;
  virtual UpdateResult insert(const Interval& iv) = 0;
  virtual UpdateResult erase(IntervalId id) = 0;

  virtual const ColoringState& state() const = 0;
  virtual std::vector<Interval> intervals() const = 0;
  virtual std::size_t size() const = 0;

  // Local engines decide purely from the signature of the component the new
  // interval lands in and recolor only inside that component.
  virtual bool is_local() const { return false; }

  // A guaranteed bound on recolorings per update, if the engine has one.
  virtual std::optional<int> declared_recolor_budget() const { return std::nullopt; }

  UpdateResult apply(const UpdateOp& op);
  OracleVerdict verify() const;
};

using EngineFactory = std::function<std::unique_ptr<Engine>()>;

// Shared bookkeeping: live intervals (ordered by id) and the coloring.
class EngineBase : public Engine {
 public:
  const ColoringState& state() const override { return state_; }
  std::vector<Interval> intervals() const override;
  std::size_t size() const override { return live_.size(); }

 protected:
  const Interval& live(IntervalId id) const;
  void require_fresh(const Interval& iv) const;
  void require_live(IntervalId id) const;

  void begin_update() { state_.begin_batch(); }
  // Closes the batch and records it in the ledger as one update.
  UpdateResult finish_update();

  std::map<IntervalId, Interval> live_;
  ColoringState state_;
};

// Proper coloring by first fit: each new interval takes the smallest index
// not used by an intersecting live interval. Never recolors; the color count
// is unbounded in general.
class ProperColorEngine final : public EngineBase {
 public:
  explicit ProperColorEngine(int level = 0) : level_(level) {}

  std::string name() const override { return "trivial"; }
  UpdateResult insert(const Interval& iv) override;
  UpdateResult erase(IntervalId id) override;
  std::optional<int> declared_recolor_budget() const override { return 0; }

 private:
  int level_;
};

// Every interval gets a color of its own, in insertion order. This is
// trivially conflict-free and never recolors, at the price of n colors.
class UniqueColorEngine final : public EngineBase {
 public:
  std::string name() const override { return "unique"; }
  UpdateResult insert(const Interval& iv) override;
  UpdateResult erase(IntervalId id) override;
  std::optional<int> declared_recolor_budget() const override { return 0; }

 private:
  int next_ = 0;
};

// Insertion-only local toy: the new interval takes the smallest palette index
// that keeps its connected component conflict-free; nothing is recolored.
class LocalGreedyEngine final : public EngineBase {
 public:
  std::string name() const override { return "local-greedy"; }
  UpdateResult insert(const Interval& iv) override;
  UpdateResult erase(IntervalId id) override;
  bool is_local() const override { return true; }
  std::optional<int> declared_recolor_budget() const override { return 0; }
};

}  // namespace cfc
