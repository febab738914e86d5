#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace agti {

// Two labels, ordered alpha < beta. The byte value doubles as the bit used
// in pattern indices.
enum class Label : std::uint8_t { alpha = 0, beta = 1 };

inline constexpr Label other(Label l) noexcept {
  return l == Label::alpha ? Label::beta : Label::alpha;
}

inline const char *to_string(Label l) noexcept {
  return l == Label::alpha ? "alpha" : "beta";
}

// Joint decisions of an ensemble, classifier 1 first.
using Pattern = std::vector<Label>;

// Largest ensemble a sketch will hold (2^24 counters).
inline constexpr int kMaxEnsemble = 24;

inline constexpr std::size_t pattern_count(int n) noexcept {
  return std::size_t{1} << n;
}

// Lexicographic index with classifier 1 as the most significant bit.
inline std::size_t pattern_index(std::span<const Label> p) noexcept {
  std::size_t idx = 0;
  for (Label l : p) idx = (idx << 1) | static_cast<std::size_t>(l);
  return idx;
}

inline Label pattern_label(std::size_t index, int n, int classifier) noexcept {
  return static_cast<Label>((index >> (n - 1 - classifier)) & 1u);
}

inline Pattern pattern_at(std::size_t index, int n) {
  Pattern p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[i] = pattern_label(index, n, i);
  return p;
}

// "aab" style rendering, handy in reports and test failures.
std::string pattern_name(std::size_t index, int n);

}  // namespace agti
