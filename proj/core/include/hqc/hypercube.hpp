#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hqc {

/// Largest supported dimension. Vertices are packed 64 coordinates per word.
inline constexpr std::size_t kMaxDimension = std::size_t{1} << 20;

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch() : std::invalid_argument("dimension mismatch") {}
};

/// A point of Z_2^n. Coordinates are addressed 1..n; index 0 is the identity
/// flip (e_0 = 0) and is accepted by toggle/flip as a no-op.
class Vertex {
 public:
  explicit Vertex(std::size_t n);

  /// Parses a string of '0'/'1' characters, coordinate 1 first.
  static Vertex parse(std::string_view bits);
  static Vertex ones(std::size_t n);

  std::size_t dim() const noexcept { return n_; }
  bool bit(std::size_t i) const;
  void toggle(std::size_t i);

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::string to_string() const;

  friend bool operator==(const Vertex&, const Vertex&) = default;

 private:
  friend class CouplingState;

  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

std::size_t hamming(const Vertex& x, const Vertex& y);

/// x + e_i (mod 2). i = 0 returns x unchanged; i > n throws std::out_of_range.
Vertex flip(const Vertex& x, std::size_t i);

/// The pair (X, Y) with the unmatched set U = {i : x(i) != y(i)} cached.
///
/// U is kept as a sorted array of 1-based indices; membership is answered by
/// the packed difference mask x ^ y. Joint flips update both incrementally.
class CouplingState {
 public:
  CouplingState(Vertex x, Vertex y);

  const Vertex& x() const noexcept { return x_; }
  const Vertex& y() const noexcept { return y_; }
  std::size_t dim() const noexcept { return x_.dim(); }

  std::span<const std::uint32_t> unmatched() const noexcept { return unmatched_; }
  std::size_t n_unmatched() const noexcept { return unmatched_.size(); }
  std::size_t n_matched() const noexcept { return dim() - unmatched_.size(); }
  bool is_unmatched(std::size_t i) const;

  /// The r-th matched coordinate (0-based rank, increasing index order).
  std::size_t nth_matched(std::size_t r) const;

  /// Joint jump: X <- X + e_i, Y <- Y + e_j. Either index may be 0.
  void apply(std::size_t i, std::size_t j);

  /// Recomputes U from x and y and compares it with the cached copy.
  bool consistent() const;

  friend bool operator==(const CouplingState& a, const CouplingState& b) {
    return a.x_ == b.x_ && a.y_ == b.y_;
  }

 private:
  void toggle_diff(std::size_t i);

  Vertex x_;
  Vertex y_;
  Vertex diff_;
  std::vector<std::uint32_t> unmatched_;
};

CouplingState make_state(Vertex x, Vertex y);

}  // namespace hqc
