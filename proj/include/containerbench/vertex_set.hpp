#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "containerbench/errors.hpp"

namespace cbench {

using Vertex = int;

/// A subset of the vertices 0..universe-1 of some host (hyper)graph.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe) : bits_(universe) {}

  VertexSet(std::size_t universe, std::initializer_list<Vertex> members) : bits_(universe) {
    for (auto v : members) insert(v);
  }

  template <typename Range>
  static VertexSet of(std::size_t universe, const Range& members) {
    VertexSet s(universe);
    for (auto v : members) s.insert(static_cast<Vertex>(v));
    return s;
  }

  static VertexSet all(std::size_t universe) {
    VertexSet s(universe);
    s.bits_.set();
    return s;
  }

  std::size_t universe() const { return bits_.size(); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }

  bool contains(Vertex v) const {
    return v >= 0 && static_cast<std::size_t>(v) < bits_.size() && bits_.test(static_cast<std::size_t>(v));
  }

  void insert(Vertex v) {
    check(v);
    bits_.set(static_cast<std::size_t>(v));
  }

  void erase(Vertex v) {
    check(v);
    bits_.reset(static_cast<std::size_t>(v));
  }

  bool is_subset_of(const VertexSet& other) const { return bits_.is_subset_of(other.bits_); }
  bool intersects(const VertexSet& other) const { return bits_.intersects(other.bits_); }

  /// Smallest member, or -1 when empty.
  Vertex first() const {
    auto p = bits_.find_first();
    return p == boost::dynamic_bitset<>::npos ? -1 : static_cast<Vertex>(p);
  }

  /// Smallest member strictly greater than v, or -1.
  Vertex next(Vertex v) const {
    auto p = bits_.find_next(static_cast<std::size_t>(v));
    return p == boost::dynamic_bitset<>::npos ? -1 : static_cast<Vertex>(p);
  }

  template <typename F>
  void for_each(F&& f) const {
    for (auto p = bits_.find_first(); p != boost::dynamic_bitset<>::npos; p = bits_.find_next(p))
      f(static_cast<Vertex>(p));
  }

  std::vector<Vertex> members() const {
    std::vector<Vertex> out;
    out.reserve(size());
    for_each([&](Vertex v) { out.push_back(v); });
    return out;
  }

  VertexSet& operator|=(const VertexSet& o) {
    bits_ |= o.bits_;
    return *this;
  }
  VertexSet& operator&=(const VertexSet& o) {
    bits_ &= o.bits_;
    return *this;
  }
  VertexSet& operator-=(const VertexSet& o) {
    bits_ -= o.bits_;
    return *this;
  }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

  friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.bits_ == b.bits_; }
  friend bool operator!=(const VertexSet& a, const VertexSet& b) { return !(a == b); }

  std::string to_string() const {
    std::string s = "{";
    bool first_member = true;
    for_each([&](Vertex v) {
      if (!first_member) s += ",";
      s += std::to_string(v);
      first_member = false;
    });
    return s + "}";
  }

 private:
  void check(Vertex v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= bits_.size())
      throw std::out_of_range("vertex " + std::to_string(v) + " outside 0.." +
                              std::to_string(static_cast<long long>(bits_.size()) - 1));
  }

  boost::dynamic_bitset<> bits_;
};

}  // namespace cbench
