#include "cfc/engine_dynamic.hpp"

#include <algorithm>
#include <cmath>

namespace cfc {

struct DynamicEngine::Node {
  std::uint64_t uid = 0;
  int level = 0;  // 0 at the leaves
  std::vector<Key> keys;
  std::vector<std::unique_ptr<Node>> children;
  std::vector<SlotBucket> slots;
  std::vector<IntervalId> extremes;

  bool leaf() const { return children.empty(); }
};

namespace {

std::size_t key_position(const std::vector<DynamicEngine::Key>& keys, const DynamicEngine::Key& k) {
  return static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), k) - keys.begin());
}

}  // namespace

DynamicEngine::DynamicEngine(Mode mode, int t, double eps) : mode_(mode), t_(t), eps_(eps) {
  root_ = std::unique_ptr<Node>(make_node(0));
}

DynamicEngine DynamicEngine::fixed(int t) {
  if (t < 2) throw ConfigError("minimum degree t must be >= 2, got " + std::to_string(t));
  return DynamicEngine(Mode::FixedT, t, 0.0);
}

DynamicEngine DynamicEngine::epsilon(double eps) {
  if (!(eps > 0.0) || eps > 1.0) throw ConfigError("eps must lie in (0, 1]");
  return DynamicEngine(Mode::Epsilon, 2, eps);
}

DynamicEngine::DynamicEngine(DynamicEngine&&) noexcept = default;
DynamicEngine& DynamicEngine::operator=(DynamicEngine&&) noexcept = default;
DynamicEngine::~DynamicEngine() = default;

std::string DynamicEngine::name() const { return mode_ == Mode::FixedT ? "dynamic" : "eps"; }

int DynamicEngine::height() const { return root_->level; }

std::size_t DynamicEngine::node_count() const {
  std::size_t count = 0;
  std::vector<const Node*> stack{root_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    ++count;
    for (const auto& c : n->children) stack.push_back(c.get());
  }
  return count;
}

std::size_t DynamicEngine::key_count() const {
  std::size_t count = 0;
  std::vector<const Node*> stack{root_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    count += n->keys.size();
    for (const auto& c : n->children) stack.push_back(c.get());
  }
  return count;
}

std::set<std::uint64_t> DynamicEngine::last_touched_nodes() const {
  std::set<std::uint64_t> out;
  for (const auto& s : last_steps_) out.insert(s.nodes.begin(), s.nodes.end());
  return out;
}

std::uint64_t DynamicEngine::node_of(IntervalId id) const {
  auto it = home_.find(id);
  if (it == home_.end()) throw InputError("interval " + std::to_string(id) + " is not live");
  return it->second->uid;
}

DynamicEngine::Node* DynamicEngine::make_node(int level) {
  auto* n = new Node;
  n->uid = next_uid_++;
  n->level = level;
  return n;
}

// Pulls a node into the current step: its members are queued for
// relocation and its extremes remembered so they can be demoted later.
void DynamicEngine::touch(Node* n) {
  step_nodes_.insert(n->uid);
  if (!touched_.emplace(n->uid, n).second) return;
  for (auto& s : n->slots) {
    for (IntervalId id : s.ids()) pending_.insert(id);
    s.clear();
  }
  old_extremes_.insert(n->extremes.begin(), n->extremes.end());
  n->extremes.clear();
}

void DynamicEngine::forget(Node* n) { touched_.erase(n->uid); }

void DynamicEngine::finalize(const std::string& kind) {
  for (auto& [uid, n] : touched_) n->slots.assign(n->keys.size(), SlotBucket{});

  // With coinciding coordinates, swapping a key for its neighbor can push an
  // interval below the swap path. Its new node then joins the step as well.
  while (!pending_.empty()) {
    IntervalId id = *pending_.begin();
    pending_.erase(pending_.begin());
    const Interval& iv = live_.at(id);
    Located loc = locate(iv);
    if (!touched_.count(loc.node->uid)) {
      touch(loc.node);
      loc.node->slots.assign(loc.node->keys.size(), SlotBucket{});
      primitives_.push_back("descend");
    }
    loc.node->slots[loc.slot].insert(iv);
    home_[id] = loc.node;
  }

  std::set<IntervalId> now_extreme;
  for (auto& [uid, n] : touched_) {
    std::vector<IntervalId> ext = collect_extremes(n->slots);
    std::vector<Interval> ivs;
    ivs.reserve(ext.size());
    for (IntervalId id : ext) ivs.push_back(live_.at(id));
    Assignment desired = chain_color_level(ivs, n->level, state_);
    for (IntervalId id : ext) {
      state_.assign(id, desired.at(id));
      now_extreme.insert(id);
    }
    n->extremes = std::move(ext);
  }
  for (IntervalId id : old_extremes_) {
    if (live_.count(id) && !now_extreme.count(id)) state_.assign(id, Color::dummy());
  }

  last_steps_.push_back(Step{kind, std::move(primitives_), {step_nodes_.begin(), step_nodes_.end()}});
  touched_.clear();
  pending_.clear();
  old_extremes_.clear();
  primitives_.clear();
  step_nodes_.clear();
  max_height_ = std::max(max_height_, height());
}

DynamicEngine::Located DynamicEngine::locate(const Interval& iv) const {
  Node* v = root_.get();
  for (;;) {
    auto it = std::lower_bound(v->keys.begin(), v->keys.end(), iv.left,
                               [](const Key& k, double x) { return k.coord < x; });
    std::size_t pos = static_cast<std::size_t>(it - v->keys.begin());
    if (it != v->keys.end() && it->coord <= iv.right) return Located{v, pos};
    if (v->leaf()) throw InvariantError("interval " + std::to_string(iv.id) + " contains no key");
    v = v->children[pos].get();
  }
}

// ---- insertion (single pass, splitting full nodes on the way down) ----

void DynamicEngine::insert_key(const Key& k) {
  const std::size_t full = 2 * static_cast<std::size_t>(t_) - 1;
  if (root_->keys.size() == full) {
    touch(root_.get());
    std::unique_ptr<Node> top(make_node(root_->level + 1));
    touch(top.get());
    top->children.push_back(std::move(root_));
    root_ = std::move(top);
    split_child(root_.get(), 0);
  }
  insert_nonfull(root_.get(), k);
}

void DynamicEngine::insert_nonfull(Node* x, const Key& k) {
  const std::size_t full = 2 * static_cast<std::size_t>(t_) - 1;
  touch(x);
  std::size_t i = key_position(x->keys, k);
  if (i < x->keys.size() && x->keys[i] == k) throw InvariantError("duplicate B-tree key");
  if (x->leaf()) {
    x->keys.insert(x->keys.begin() + static_cast<std::ptrdiff_t>(i), k);
    primitives_.push_back("leaf");
    return;
  }
  if (x->children[i]->keys.size() == full) {
    split_child(x, i);
    if (x->keys[i] < k) ++i;
  }
  insert_nonfull(x->children[i].get(), k);
}

void DynamicEngine::split_child(Node* x, std::size_t i) {
  const auto t = static_cast<std::size_t>(t_);
  Node* y = x->children[i].get();
  touch(x);
  touch(y);
  std::unique_ptr<Node> z(make_node(y->level));
  touch(z.get());
  Key median = y->keys[t - 1];
  z->keys.assign(y->keys.begin() + static_cast<std::ptrdiff_t>(t), y->keys.end());
  y->keys.resize(t - 1);
  if (!y->leaf()) {
    for (std::size_t j = t; j < y->children.size(); ++j) z->children.push_back(std::move(y->children[j]));
    y->children.resize(t);
  }
  x->keys.insert(x->keys.begin() + static_cast<std::ptrdiff_t>(i), median);
  x->children.insert(x->children.begin() + static_cast<std::ptrdiff_t>(i) + 1, std::move(z));
  primitives_.push_back("split");
  ++counters_.splits;
}

// ---- deletion (single pass, topping up thin children on the way down) ----

void DynamicEngine::delete_key(const Key& k) {
  delete_from(root_.get(), k);
  if (root_->keys.empty() && !root_->leaf()) {
    forget(root_.get());
    std::unique_ptr<Node> child = std::move(root_->children[0]);
    root_ = std::move(child);
  }
}

void DynamicEngine::merge_children(Node* x, std::size_t i) {
  Node* y = x->children[i].get();
  Node* z = x->children[i + 1].get();
  touch(x);
  touch(y);
  touch(z);
  y->keys.push_back(x->keys[i]);
  y->keys.insert(y->keys.end(), z->keys.begin(), z->keys.end());
  for (auto& c : z->children) y->children.push_back(std::move(c));
  x->keys.erase(x->keys.begin() + static_cast<std::ptrdiff_t>(i));
  forget(z);
  x->children.erase(x->children.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  primitives_.push_back("merge");
  ++counters_.merges;
}

void DynamicEngine::delete_from(Node* x, const Key& k) {
  const auto t = static_cast<std::size_t>(t_);
  touch(x);
  std::size_t i = key_position(x->keys, k);
  const bool here = i < x->keys.size() && x->keys[i] == k;

  if (here && x->leaf()) {
    x->keys.erase(x->keys.begin() + static_cast<std::ptrdiff_t>(i));
    primitives_.push_back("leaf");
    return;
  }
  if (here) {
    Node* y = x->children[i].get();
    Node* z = x->children[i + 1].get();
    if (y->keys.size() >= t) {
      const Node* w = y;
      while (!w->leaf()) w = w->children.back().get();
      Key pred = w->keys.back();
      delete_from(y, pred);
      x->keys[i] = pred;
      primitives_.push_back("swap");
      ++counters_.swaps;
    } else if (z->keys.size() >= t) {
      const Node* w = z;
      while (!w->leaf()) w = w->children.front().get();
      Key succ = w->keys.front();
      delete_from(z, succ);
      x->keys[i] = succ;
      primitives_.push_back("swap");
      ++counters_.swaps;
    } else {
      merge_children(x, i);
      delete_from(y, k);
    }
    return;
  }
  if (x->leaf()) throw InvariantError("B-tree key to delete is missing");

  if (x->children[i]->keys.size() + 1 == t) {
    Node* c = x->children[i].get();
    Node* left = i > 0 ? x->children[i - 1].get() : nullptr;
    Node* right = i + 1 < x->children.size() ? x->children[i + 1].get() : nullptr;
    if (left && left->keys.size() >= t) {
      touch(c);
      touch(left);
      c->keys.insert(c->keys.begin(), x->keys[i - 1]);
      x->keys[i - 1] = left->keys.back();
      left->keys.pop_back();
      if (!left->leaf()) {
        c->children.insert(c->children.begin(), std::move(left->children.back()));
        left->children.pop_back();
      }
      primitives_.push_back("rotate");
      ++counters_.rotations;
    } else if (right && right->keys.size() >= t) {
      touch(c);
      touch(right);
      c->keys.push_back(x->keys[i]);
      x->keys[i] = right->keys.front();
      right->keys.erase(right->keys.begin());
      if (!right->leaf()) {
        c->children.push_back(std::move(right->children.front()));
        right->children.erase(right->children.begin());
      }
      primitives_.push_back("rotate");
      ++counters_.rotations;
    } else if (right) {
      merge_children(x, i);
    } else {
      merge_children(x, i - 1);
      --i;
    }
  }
  delete_from(x->children[i].get(), k);
}

// ---- public updates ----

UpdateResult DynamicEngine::insert(const Interval& iv) {
  require_fresh(iv);
  last_steps_.clear();
  begin_update();
  live_.emplace(iv.id, iv);
  state_.assign(iv.id, Color::dummy());

  insert_key(Key{iv.left, iv.id, 0});
  finalize("insert-key");
  insert_key(Key{iv.right, iv.id, 1});
  finalize("insert-key");

  Located loc = locate(iv);
  touch(loc.node);
  pending_.insert(iv.id);
  finalize("associate");

  Batch normal = state_.end_batch();
  UpdateResult out{std::move(normal.events), normal.recolorings, 0};
  if (needs_rebuild()) {
    state_.begin_batch();
    rebuild();
    Batch rb = state_.end_batch();
    out.events.insert(out.events.end(), rb.events.begin(), rb.events.end());
    out.rebuild_recolorings = rb.recolorings;
  }
  state_.ledger().record(out.recolorings, out.rebuild_recolorings);
  return out;
}

UpdateResult DynamicEngine::erase(IntervalId id) {
  const Interval iv = live(id);
  last_steps_.clear();
  begin_update();

  touch(home_.at(id));
  pending_.erase(id);
  home_.erase(id);
  live_.erase(id);
  state_.remove(id);
  finalize("disassociate");

  delete_key(Key{iv.left, iv.id, 0});
  finalize("delete-key");
  delete_key(Key{iv.right, iv.id, 1});
  finalize("delete-key");

  Batch normal = state_.end_batch();
  UpdateResult out{std::move(normal.events), normal.recolorings, 0};
  if (needs_rebuild()) {
    state_.begin_batch();
    rebuild();
    Batch rb = state_.end_batch();
    out.events.insert(out.events.end(), rb.events.begin(), rb.events.end());
    out.rebuild_recolorings = rb.recolorings;
  }
  state_.ledger().record(out.recolorings, out.rebuild_recolorings);
  return out;
}

// ---- epsilon-mode rebuild ----

bool DynamicEngine::needs_rebuild() const {
  if (mode_ != Mode::Epsilon) return false;
  const std::size_t n = live_.size();
  if (n_last_ == 0) return n > 0;
  return 2 * n < n_last_ || n > 2 * n_last_;
}

std::unique_ptr<DynamicEngine::Node> DynamicEngine::build(const LayoutNode& layout,
                                                         const std::vector<Key>& keys) {
  std::unique_ptr<Node> n(make_node(layout.level));
  for (std::size_t k : layout.keys) n->keys.push_back(keys[k]);
  for (const auto& child : layout.children) n->children.push_back(build(child, keys));
  n->slots.assign(n->keys.size(), SlotBucket{});
  return n;
}

void DynamicEngine::rebuild() {
  const std::size_t n = live_.size();
  n_last_ = n;
  home_.clear();
  ++counters_.rebuilds;
  if (n == 0) {
    root_.reset(make_node(0));
    last_steps_.push_back(Step{"rebuild", {}, {root_->uid}});
    return;
  }
  t_ = std::max(2, static_cast<int>(std::lround(std::pow(static_cast<double>(n), eps_))));

  std::vector<Key> keys;
  keys.reserve(2 * n);
  for (const auto& [id, iv] : live_) {
    keys.push_back(Key{iv.left, id, 0});
    keys.push_back(Key{iv.right, id, 1});
  }
  std::sort(keys.begin(), keys.end());
  root_ = build(balanced_layout(keys.size(), t_), keys);

  for (const auto& [id, iv] : live_) {
    Located loc = locate(iv);
    loc.node->slots[loc.slot].insert(iv);
    home_[id] = loc.node;
  }

  Step step{"rebuild", {}, {}};
  std::set<IntervalId> extreme;
  std::vector<Node*> stack{root_.get()};
  while (!stack.empty()) {
    Node* v = stack.back();
    stack.pop_back();
    step.nodes.push_back(v->uid);
    v->extremes = collect_extremes(v->slots);
    std::vector<Interval> ivs;
    for (IntervalId id : v->extremes) ivs.push_back(live_.at(id));
    Assignment desired = chain_color_level(ivs, v->level, state_);
    for (IntervalId id : v->extremes) {
      state_.assign(id, desired.at(id));
      extreme.insert(id);
    }
    for (const auto& c : v->children) stack.push_back(c.get());
  }
  for (const auto& [id, iv] : live_) {
    if (!extreme.count(id)) state_.assign(id, Color::dummy());
  }
  std::sort(step.nodes.begin(), step.nodes.end());
  last_steps_.push_back(std::move(step));
  max_height_ = std::max(max_height_, height());
}

// ---- audit ----

std::optional<std::string> DynamicEngine::audit() const {
  const std::size_t t = static_cast<std::size_t>(t_);
  std::size_t keys_seen = 0;
  std::size_t members_seen = 0;

  struct Frame {
    const Node* node;
    const Key* lo;
    const Key* hi;
  };
  std::vector<Frame> stack{{root_.get(), nullptr, nullptr}};
  while (!stack.empty()) {
    auto [v, lo, hi] = stack.back();
    stack.pop_back();
    const std::string where = "node " + std::to_string(v->uid);
    const bool is_root = v == root_.get();

    if (v->keys.size() > 2 * t - 1) return where + " holds too many keys";
    if (!is_root && v->keys.size() + 1 < t) return where + " holds too few keys";
    if (is_root && v->keys.empty() && !v->leaf()) return "empty internal root";
    if (!std::is_sorted(v->keys.begin(), v->keys.end())) return where + " keys out of order";
    for (const Key& k : v->keys) {
      if ((lo && !(*lo < k)) || (hi && !(k < *hi))) return where + " violates the search order";
    }
    if (v->leaf()) {
      if (v->level != 0) return where + " is a leaf above level 0";
    } else {
      if (v->children.size() != v->keys.size() + 1) return where + " child count mismatch";
      for (std::size_t i = 0; i < v->children.size(); ++i) {
        if (v->children[i]->level + 1 != v->level) return where + " has a child on the wrong level";
        stack.push_back({v->children[i].get(), i > 0 ? &v->keys[i - 1] : lo,
                         i < v->keys.size() ? &v->keys[i] : hi});
      }
    }
    keys_seen += v->keys.size();
    if (v->slots.size() != v->keys.size()) return where + " slot count mismatch";

    std::vector<IntervalId> ext = collect_extremes(v->slots);
    if (ext != v->extremes) return where + " has stale extremes";
    std::set<IntervalId> ext_set(ext.begin(), ext.end());
    std::vector<Interval> ext_ivs;
    Assignment local;
    for (std::size_t s = 0; s < v->slots.size(); ++s) {
      for (IntervalId id : v->slots[s].ids()) {
        ++members_seen;
        auto it = live_.find(id);
        if (it == live_.end()) return where + " holds a dead interval";
        Located loc = locate(it->second);
        if (loc.node != v || loc.slot != s) {
          return "interval " + std::to_string(id) + " stored at the wrong node or slot";
        }
        auto h = home_.find(id);
        if (h == home_.end() || h->second != v) return "home of interval " + std::to_string(id) + " is stale";
        Color c = state_.color_of(id);
        if (!ext_set.count(id)) {
          if (!c.is_dummy()) return "non-extreme interval " + std::to_string(id) + " is not dummy";
          continue;
        }
        if (!c.is_dummy() && (c.level != v->level || c.index < 0 || c.index > 1)) {
          return "interval " + std::to_string(id) + " colored outside its level palette";
        }
        ext_ivs.push_back(it->second);
        local[id] = c;
      }
    }
    if (!is_conflict_free(ext_ivs, local).ok()) return where + " extremes are not locally conflict-free";
  }
  if (keys_seen != 2 * live_.size()) return "key count does not match 2n";
  if (members_seen != live_.size()) return "interval count mismatch between nodes and live set";
  if (mode_ == Mode::Epsilon && n_last_ > 0 && (2 * live_.size() < n_last_ || live_.size() > 2 * n_last_)) {
    return "size left the rebuild window";
  }
  return std::nullopt;
}

}  // namespace cfc
