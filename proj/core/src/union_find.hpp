#pragma once

#include <map>
#include <string>

namespace cx::detail {

// Union-find over string keys; roots are not canonicalized, callers pick
// their own representatives per class afterwards.
class UnionFind {
public:
  std::string find(const std::string& x) {
    auto it = parent_.find(x);
    if (it == parent_.end()) {
      parent_.emplace(x, x);
      return x;
    }
    std::string root = x;
    while (parent_.at(root) != root) root = parent_.at(root);
    std::string cur = x;
    while (parent_.at(cur) != root) {
      std::string next = parent_.at(cur);
      parent_.at(cur) = root;
      cur = next;
    }
    return root;
  }

  // Returns true when the two classes were distinct and are now merged.
  bool unite(const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra == rb) return false;
    if (rb < ra) std::swap(ra, rb);
    parent_.at(rb) = ra;
    return true;
  }

  bool same(const std::string& a, const std::string& b) {
    return find(a) == find(b);
  }

private:
  std::map<std::string, std::string> parent_;
};

}  // namespace cx::detail
