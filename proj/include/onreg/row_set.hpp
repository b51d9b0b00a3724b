#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace onreg {

/// Fixed-universe subset of hypothesis rows {0, ..., n-1}.
class RowSet {
 public:
  RowSet() = default;
  explicit RowSet(std::size_t universe, bool full = false);
  static RowSet of(std::size_t universe, const std::vector<std::size_t>& members);

  std::size_t universe() const noexcept { return n_; }
  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const noexcept;
  bool empty() const noexcept;
  std::vector<std::size_t> members() const;
  /// Smallest member, or universe() when empty.
  std::size_t first() const noexcept;

  RowSet operator&(const RowSet& other) const;
  RowSet operator|(const RowSet& other) const;
  /// Members of *this not in other.
  RowSet minus(const RowSet& other) const;
  std::size_t intersection_count(const RowSet& other) const noexcept;
  bool subset_of(const RowSet& other) const noexcept;

  bool operator==(const RowSet& other) const noexcept = default;
  std::size_t hash() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct RowSetHash {
  std::size_t operator()(const RowSet& s) const noexcept { return s.hash(); }
};

}  // namespace onreg
