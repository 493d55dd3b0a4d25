#pragma once

#include <cstdint>
#include <queue>
#include <tuple>
#include <utility>
#include <vector>

namespace riskcbs {

// Lexicographic priority of a constraint-tree node, all components ascending.
struct FrontierKey {
  double cost = 0.0;   // sum of path costs J
  int conflicts = 0;   // pairwise collisions in the joint plan
  int changed = 0;     // agents whose budget differs from the parent's
};

// Min-queue over FrontierKey with FIFO tie-breaking via an insertion counter,
// so extraction order is fully deterministic.
template <typename T>
class Frontier {
 public:
  void push(const FrontierKey& key, T value) {
    heap_.push(Entry{key, next_seq_++, std::move(value)});
  }

  T pop() {
    T top = std::move(const_cast<Entry&>(heap_.top()).value);
    heap_.pop();
    return top;
  }

  const FrontierKey& top_key() const { return heap_.top().key; }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Entry {
    FrontierKey key;
    std::uint64_t seq;
    T value;
  };
  struct After {
    bool operator()(const Entry& a, const Entry& b) const {
      return std::tie(a.key.cost, a.key.conflicts, a.key.changed, a.seq) >
             std::tie(b.key.cost, b.key.conflicts, b.key.changed, b.seq);
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, After> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace riskcbs
