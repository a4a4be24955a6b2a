#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>

namespace psum {

// Retrieval operation for a BinSeT: an associative combine, an optional
// identity and, for group operations, an optional inverse. The tree never
// relies on the inverse; it exists so callers can express subtraction-style
// workarounds themselves when the operation supports them.
template <typename T>
struct Semigroup {
  std::function<T(const T&, const T&)> combine;
  std::optional<T> identity{};
  std::function<T(const T&)> inverse{};
};

// Height-balanced binary segment tree over a dynamic sparse set of array
// positions. Leaves hold (index, value); an internal node holds the smallest
// index present in its right subtree (the search divider) and the combine
// of its children's aggregates. Balancing is AVL, so every operation visits
// O(lg size) nodes.
//
// The update operation may differ from the retrieval combine; leaves apply
// update_op and every ancestor recomputes its aggregate from its children,
// so non-invertible retrieval operations (max, ...) work unchanged.
template <typename T>
class BinSeT {
 public:
  explicit BinSeT(Semigroup<T> retrieve_op,
                  std::function<T(const T&, const T&)> update_op = {})
      : op_(std::move(retrieve_op)),
        update_op_(update_op ? std::move(update_op) : op_.combine) {}

  size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  unsigned height() const { return root_ ? root_->height : 0; }
  // Nodes visited by the most recent operation.
  uint64_t last_visits() const { return visits_; }

  bool contains(uint64_t index) const {
    visits_ = 0;
    const Node* node = root_.get();
    while (node && !node->leaf()) {
      ++visits_;
      node = index < node->key ? node->left.get() : node->right.get();
    }
    if (node) ++visits_;
    return node && node->key == index;
  }

  void insert(uint64_t index, T value) {
    visits_ = 0;
    if (!root_)
      root_ = make_leaf(index, std::move(value));
    else
      insert_at(root_, index, std::move(value));
    ++size_;
  }

  void erase(uint64_t index) {
    visits_ = 0;
    if (!root_) throw std::invalid_argument("binset: index not present");
    erase_at(root_, index);
    --size_;
  }

  void update(uint64_t index, const T& delta) {
    visits_ = 0;
    if (!root_) throw std::invalid_argument("binset: index not present");
    update_at(root_.get(), index, delta);
  }

  // Aggregate over all present positions with index <= j. Empty result maps
  // to the identity when the semigroup has one, otherwise stays empty.
  std::optional<T> retrieve(uint64_t j) const {
    visits_ = 0;
    std::optional<T> r = root_ ? prefix(root_.get(), j) : std::nullopt;
    return r ? r : op_.identity;
  }

  // Aggregate over present positions in [k, j], by direct descent.
  std::optional<T> retrieve_range(uint64_t k, uint64_t j) const {
    if (k > j) throw std::invalid_argument("binset: range needs k <= j");
    visits_ = 0;
    std::optional<T> r = root_ ? range_agg(root_.get(), k, j) : std::nullopt;
    return r ? r : op_.identity;
  }

  // Full structural audit: search order, dividers, AVL balance, heights and
  // aggregates. Used by tests and the verify harness.
  bool audit() const {
    if (!root_) return size_ == 0;
    uint64_t lo, hi;
    return audit_node(root_.get(), lo, hi) && count_leaves(root_.get()) == size_;
  }

 private:
  struct Node {
    uint64_t key;      // leaf: its index; internal: min index in right subtree
    uint64_t min_key;  // smallest index anywhere in this subtree
    T agg;
    unsigned height = 1;
    std::unique_ptr<Node> left, right;
    T value{};  // leaf payload

    bool leaf() const { return !left; }
  };
  using NodePtr = std::unique_ptr<Node>;

  static NodePtr make_leaf(uint64_t index, T value) {
    auto n = std::make_unique<Node>();
    n->key = index;
    n->min_key = index;
    n->value = value;
    n->agg = std::move(value);
    return n;
  }

  int balance_of(const Node& n) const {
    return static_cast<int>(n.left->height) - static_cast<int>(n.right->height);
  }

  void pull(Node& n) const {
    n.height = 1 + std::max(n.left->height, n.right->height);
    n.min_key = n.left->min_key;
    n.agg = op_.combine(n.left->agg, n.right->agg);
  }

  // Rotations keep dividers valid as-is; only the two moved nodes need
  // their aggregates recomputed.
  void rotate_right(NodePtr& x) {
    NodePtr l = std::move(x->left);
    x->left = std::move(l->right);
    pull(*x);
    l->right = std::move(x);
    pull(*l);
    x = std::move(l);
  }

  void rotate_left(NodePtr& x) {
    NodePtr r = std::move(x->right);
    x->right = std::move(r->left);
    pull(*x);
    r->left = std::move(x);
    pull(*r);
    x = std::move(r);
  }

  void rebalance(NodePtr& node) {
    const int bal = balance_of(*node);
    if (bal > 1) {
      if (balance_of(*node->left) < 0) rotate_left(node->left);
      rotate_right(node);
    } else if (bal < -1) {
      if (balance_of(*node->right) > 0) rotate_right(node->right);
      rotate_left(node);
    }
  }

  void insert_at(NodePtr& node, uint64_t index, T value) {
    ++visits_;
    if (node->leaf()) {
      if (node->key == index)
        throw std::invalid_argument("binset: duplicate index");
      auto leaf = make_leaf(index, std::move(value));
      auto parent = std::make_unique<Node>();
      if (index < node->key) {
        parent->key = node->key;
        parent->left = std::move(leaf);
        parent->right = std::move(node);
      } else {
        parent->key = index;
        parent->left = std::move(node);
        parent->right = std::move(leaf);
      }
      pull(*parent);
      node = std::move(parent);
      return;
    }
    insert_at(index < node->key ? node->left : node->right, index, std::move(value));
    pull(*node);
    rebalance(node);
  }

  void erase_at(NodePtr& node, uint64_t index) {
    ++visits_;
    if (node->leaf()) {
      if (node->key != index)
        throw std::invalid_argument("binset: index not present");
      node = nullptr;
      return;
    }
    if (index < node->key) {
      erase_at(node->left, index);
      if (!node->left) {
        node = std::move(node->right);
        return;
      }
    } else {
      erase_at(node->right, index);
      if (!node->right) {
        node = std::move(node->left);
        return;
      }
      // Erasing the smallest right-subtree index invalidates the divider;
      // refresh it from the surviving minimum.
      node->key = node->right->min_key;
    }
    pull(*node);
    rebalance(node);
  }

  void update_at(Node* node, uint64_t index, const T& delta) {
    ++visits_;
    if (node->leaf()) {
      if (node->key != index)
        throw std::invalid_argument("binset: index not present");
      node->value = update_op_(node->value, delta);
      node->agg = node->value;
      return;
    }
    update_at(index < node->key ? node->left.get() : node->right.get(), index, delta);
    pull(*node);
  }

  std::optional<T> prefix(const Node* node, uint64_t j) const {
    ++visits_;
    if (node->leaf())
      return node->key <= j ? std::optional<T>(node->value) : std::nullopt;
    if (j < node->key) return prefix(node->left.get(), j);
    // divider <= j, so the whole left subtree is in range and the right
    // subtree contributes at least its smallest index.
    std::optional<T> rest = prefix(node->right.get(), j);
    return std::optional<T>(op_.combine(node->left->agg, *rest));
  }

  std::optional<T> suffix(const Node* node, uint64_t k) const {
    ++visits_;
    if (node->leaf())
      return node->key >= k ? std::optional<T>(node->value) : std::nullopt;
    if (k >= node->key) return suffix(node->right.get(), k);
    std::optional<T> left_part = suffix(node->left.get(), k);
    if (!left_part) return std::optional<T>(node->right->agg);
    return std::optional<T>(op_.combine(*left_part, node->right->agg));
  }

  std::optional<T> range_agg(const Node* node, uint64_t k, uint64_t j) const {
    ++visits_;
    if (node->leaf())
      return (k <= node->key && node->key <= j) ? std::optional<T>(node->value)
                                                : std::nullopt;
    if (j < node->key) return range_agg(node->left.get(), k, j);
    if (k >= node->key) return range_agg(node->right.get(), k, j);
    std::optional<T> lo = suffix(node->left.get(), k);
    std::optional<T> hi = prefix(node->right.get(), j);
    if (!lo) return hi;
    if (!hi) return lo;
    return std::optional<T>(op_.combine(*lo, *hi));
  }

  bool audit_node(const Node* node, uint64_t& min_key, uint64_t& max_key) const {
    if (node->leaf()) {
      min_key = max_key = node->key;
      return node->height == 1 && node->min_key == node->key &&
             node->agg == node->value;
    }
    uint64_t lmin, lmax, rmin, rmax;
    if (!node->right) return false;
    if (!audit_node(node->left.get(), lmin, lmax)) return false;
    if (!audit_node(node->right.get(), rmin, rmax)) return false;
    if (!(lmax < node->key && node->key == rmin)) return false;
    if (node->min_key != lmin) return false;
    if (node->height != 1 + std::max(node->left->height, node->right->height))
      return false;
    if (std::abs(balance_of(*node)) > 1) return false;
    if (!(node->agg == op_.combine(node->left->agg, node->right->agg))) return false;
    min_key = lmin;
    max_key = rmax;
    return true;
  }

  size_t count_leaves(const Node* node) const {
    if (node->leaf()) return 1;
    return count_leaves(node->left.get()) + count_leaves(node->right.get());
  }

  Semigroup<T> op_;
  std::function<T(const T&, const T&)> update_op_;
  NodePtr root_;
  size_t size_ = 0;
  mutable uint64_t visits_ = 0;
};

}  // namespace psum
