#include "onreg/row_set.hpp"

#include <bit>

#include "onreg/errors.hpp"
#include "onreg/rng.hpp"

namespace onreg {

RowSet::RowSet(std::size_t universe, bool full) : n_(universe), words_((universe + 63) / 64, 0) {
  if (full) {
    for (auto& w : words_) w = ~std::uint64_t{0};
    if (n_ % 64) words_.back() = (std::uint64_t{1} << (n_ % 64)) - 1;
  }
}

RowSet RowSet::of(std::size_t universe, const std::vector<std::size_t>& members) {
  RowSet s(universe);
  for (std::size_t i : members) {
    if (i >= universe) throw DomainError("row index out of range");
    s.set(i);
  }
  return s;
}

std::size_t RowSet::count() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool RowSet::empty() const noexcept {
  for (auto w : words_) {
    if (w) return false;
  }
  return true;
}

std::vector<std::size_t> RowSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < words_.size(); ++k) {
    std::uint64_t w = words_[k];
    while (w) {
      out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

std::size_t RowSet::first() const noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
  }
  return n_;
}

RowSet RowSet::operator&(const RowSet& other) const {
  RowSet r = *this;
  for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= other.words_[k];
  return r;
}

RowSet RowSet::operator|(const RowSet& other) const {
  RowSet r = *this;
  for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] |= other.words_[k];
  return r;
}

RowSet RowSet::minus(const RowSet& other) const {
  RowSet r = *this;
  for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= ~other.words_[k];
  return r;
}

std::size_t RowSet::intersection_count(const RowSet& other) const noexcept {
  std::size_t c = 0;
  for (std::size_t k = 0; k < words_.size(); ++k) {
    c += static_cast<std::size_t>(std::popcount(words_[k] & other.words_[k]));
  }
  return c;
}

bool RowSet::subset_of(const RowSet& other) const noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k] & ~other.words_[k]) return false;
  }
  return true;
}

std::size_t RowSet::hash() const noexcept {
  std::uint64_t h = splitmix64(n_);
  for (auto w : words_) h = splitmix64(h ^ w);
  return static_cast<std::size_t>(h);
}

}  // namespace onreg
