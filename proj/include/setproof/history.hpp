#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "setproof/error.hpp"

namespace setproof {

/// Unbounded undo/redo over immutable snapshots. Pushing a new snapshot
/// discards the redo side.
template <typename T>
class History {
 public:
  explicit History(T initial) : current_(std::move(initial)) {}

  const T& current() const { return current_; }

  void push(T next) {
    past_.push_back(std::move(current_));
    current_ = std::move(next);
    future_.clear();
  }

  void undo() {
    if (past_.empty()) throw Error(ErrorCode::NothingToUndo, "nothing to undo");
    future_.push_back(std::move(current_));
    current_ = std::move(past_.back());
    past_.pop_back();
  }

  void redo() {
    if (future_.empty()) throw Error(ErrorCode::NothingToRedo, "nothing to redo");
    past_.push_back(std::move(current_));
    current_ = std::move(future_.back());
    future_.pop_back();
  }

  bool can_undo() const { return !past_.empty(); }
  bool can_redo() const { return !future_.empty(); }
  std::size_t undo_depth() const { return past_.size(); }
  std::size_t redo_depth() const { return future_.size(); }

 private:
  T current_;
  std::vector<T> past_;
  std::vector<T> future_;
};

}  // namespace setproof
