#include "hqc/hypercube.hpp"

#include <algorithm>
#include <bit>

namespace hqc {
namespace {

constexpr std::size_t word_of(std::size_t i) { return (i - 1) >> 6; }
constexpr std::uint64_t mask_of(std::size_t i) { return std::uint64_t{1} << ((i - 1) & 63); }

void check_index(std::size_t i, std::size_t n) {
  if (i > n) {
    throw std::out_of_range("coordinate index " + std::to_string(i) +
                            " out of range for dimension " + std::to_string(n));
  }
}

}  // namespace

Vertex::Vertex(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {
  if (n == 0 || n > kMaxDimension) {
    throw std::invalid_argument("dimension must be in [1, " + std::to_string(kMaxDimension) +
                                "], got " + std::to_string(n));
  }
}

Vertex Vertex::parse(std::string_view bits) {
  Vertex v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.toggle(i + 1);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("vertex string may contain only '0' and '1'");
    }
  }
  return v;
}

Vertex Vertex::ones(std::size_t n) {
  Vertex v(n);
  std::fill(v.words_.begin(), v.words_.end(), ~std::uint64_t{0});
  if (const std::size_t rem = n & 63; rem != 0) {
    v.words_.back() = (std::uint64_t{1} << rem) - 1;
  }
  return v;
}

bool Vertex::bit(std::size_t i) const {
  if (i == 0 || i > n_) {
    throw std::out_of_range("coordinate index " + std::to_string(i) + " not in [1, " +
                            std::to_string(n_) + "]");
  }
  return (words_[word_of(i)] & mask_of(i)) != 0;
}

void Vertex::toggle(std::size_t i) {
  check_index(i, n_);
  if (i != 0) words_[word_of(i)] ^= mask_of(i);
}

std::string Vertex::to_string() const {
  std::string s(n_, '0');
  for (std::size_t i = 1; i <= n_; ++i) {
    if (bit(i)) s[i - 1] = '1';
  }
  return s;
}

std::size_t hamming(const Vertex& x, const Vertex& y) {
  if (x.dim() != y.dim()) throw DimensionMismatch();
  std::size_t d = 0;
  const auto xw = x.words();
  const auto yw = y.words();
  for (std::size_t w = 0; w < xw.size(); ++w) d += std::popcount(xw[w] ^ yw[w]);
  return d;
}

Vertex flip(const Vertex& x, std::size_t i) {
  Vertex out = x;
  out.toggle(i);
  return out;
}

CouplingState::CouplingState(Vertex x, Vertex y)
    : x_(std::move(x)), y_(std::move(y)), diff_(x_.dim()) {
  if (x_.dim() != y_.dim()) throw DimensionMismatch();
  for (std::size_t w = 0; w < diff_.words_.size(); ++w) {
    std::uint64_t bits = x_.words_[w] ^ y_.words_[w];
    diff_.words_[w] = bits;
    while (bits != 0) {
      unmatched_.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits) + 1));
      bits &= bits - 1;
    }
  }
}

bool CouplingState::is_unmatched(std::size_t i) const { return diff_.bit(i); }

std::size_t CouplingState::nth_matched(std::size_t r) const {
  if (r >= n_matched()) throw std::out_of_range("matched rank out of range");
  const std::size_t n = dim();
  for (std::size_t w = 0; w < diff_.words_.size(); ++w) {
    std::uint64_t free = ~diff_.words_[w];
    if (w + 1 == diff_.words_.size() && (n & 63) != 0) free &= (std::uint64_t{1} << (n & 63)) - 1;
    const auto count = static_cast<std::size_t>(std::popcount(free));
    if (r < count) {
      for (; r > 0; --r) free &= free - 1;
      return w * 64 + std::countr_zero(free) + 1;
    }
    r -= count;
  }
  throw std::logic_error("matched rank not found");
}

void CouplingState::toggle_diff(std::size_t i) {
  diff_.toggle(i);
  const auto idx = static_cast<std::uint32_t>(i);
  const auto pos = std::lower_bound(unmatched_.begin(), unmatched_.end(), idx);
  if (diff_.bit(i)) {
    unmatched_.insert(pos, idx);
  } else {
    unmatched_.erase(pos);
  }
}

void CouplingState::apply(std::size_t i, std::size_t j) {
  x_.toggle(i);
  y_.toggle(j);
  if (i == j) return;
  if (i != 0) toggle_diff(i);
  if (j != 0) toggle_diff(j);
}

bool CouplingState::consistent() const {
  const CouplingState fresh(x_, y_);
  return fresh.unmatched_ == unmatched_ && fresh.diff_ == diff_;
}

CouplingState make_state(Vertex x, Vertex y) { return CouplingState(std::move(x), std::move(y)); }

}  // namespace hqc
