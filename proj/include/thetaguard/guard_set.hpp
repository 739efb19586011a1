#pragma once

#include <vector>

#include "thetaguard/geometry.hpp"

namespace thetaguard {

// Deduplicated guard positions. Exact coordinate duplicates are dropped on
// ingestion; near-duplicates are the caller's problem.
class GuardSet {
 public:
  GuardSet() = default;
  explicit GuardSet(std::vector<Point> pts) : guards_(std::move(pts)) {
    for (const Point& p : guards_)
      if (!finite(p)) throw std::invalid_argument("non-finite guard coordinate");
    std::sort(guards_.begin(), guards_.end(), lex_less);
    guards_.erase(std::unique(guards_.begin(), guards_.end()), guards_.end());
    box_ = bbox_of(guards_);
  }

  const std::vector<Point>& guards() const { return guards_; }
  std::size_t size() const { return guards_.size(); }
  bool empty() const { return guards_.empty(); }
  const BBox& bbox() const { return box_; }

  // Length scale for tolerances; never zero.
  double scale() const { return std::max(box_.diameter(), 1.0); }

  bool contains(Point p) const {
    return std::binary_search(guards_.begin(), guards_.end(), p, lex_less);
  }

 private:
  std::vector<Point> guards_;
  BBox box_;
};

}  // namespace thetaguard
