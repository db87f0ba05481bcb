#pragma once

// Brute-force module oracle for k[x]/(x^(n+1)) over GF(2). Homomorphisms are
// found by enumerating every matrix and keeping those commuting with x; the
// free-factoring subspace is the XOR span of all composites through R.
// Shares no code with the library.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

namespace spectra::test {

class BruteForceAn {
 public:
  explicit BruteForceAn(int n) : n_(n) {}

  // Hom(M_i, M_j) as bitmasks of j x i matrices (bit r*i + c).
  std::vector<std::uint32_t> homs(int i, int j) const {
    std::vector<std::uint32_t> out;
    const std::uint32_t total = 1u << (i * j);
    for (std::uint32_t m = 0; m < total; ++m)
      if (commutes(m, i, j)) out.push_back(m);
    return out;
  }

  std::vector<std::uint32_t> free_span(int i, int j) const {
    const int r = n_ + 1;
    std::set<std::uint32_t> span{0};
    for (auto a : homs(i, r))
      for (auto b : homs(r, j)) {
        const std::uint32_t c = multiply(b, a, j, r, i);
        if (span.count(c)) continue;
        std::set<std::uint32_t> next = span;
        for (auto s : span) next.insert(s ^ c);
        span = std::move(next);
      }
    return {span.begin(), span.end()};
  }

  static int log2(std::size_t v) {
    int d = 0;
    while ((std::size_t{1} << d) < v) ++d;
    return d;
  }

  int hom_dim(int i, int j) const { return log2(homs(i, j).size()); }
  int stable_dim(int i, int j) const { return hom_dim(i, j) - log2(free_span(i, j).size()); }

  // Whether g o f lies in the free-factoring subspace for every f: M_i -> M_j, g: M_j -> M_k.
  bool composites_stably_zero(int i, int j, int k) const {
    const auto span = free_span(i, k);
    const std::set<std::uint32_t> s(span.begin(), span.end());
    for (auto f : homs(i, j))
      for (auto g : homs(j, k))
        if (!s.count(multiply(g, f, k, j, i))) return false;
    return true;
  }

  // b (rows x inner) times a (inner x cols)
  static std::uint32_t multiply(std::uint32_t b, std::uint32_t a, int rows, int inner, int cols) {
    std::uint32_t c = 0;
    for (int r = 0; r < rows; ++r)
      for (int q = 0; q < cols; ++q) {
        int bit = 0;
        for (int t = 0; t < inner; ++t) bit ^= static_cast<int>((b >> (r * inner + t)) & (a >> (t * cols + q)) & 1u);
        if (bit) c |= 1u << (r * cols + q);
      }
    return c;
  }

 private:
  // x on M_i sends basis vector k to k+1 (zero past the end).
  static std::uint32_t shift(int i) {
    std::uint32_t s = 0;
    for (int k = 0; k + 1 < i; ++k) s |= 1u << ((k + 1) * i + k);
    return s;
  }

  static bool commutes(std::uint32_t m, int i, int j) {
    return multiply(m, shift(i), j, i, i) == multiply(shift(j), m, j, j, i);
  }

  int n_;
};

// Closed form for the stable dimension, checked against the brute force.
inline int an_stable_dim(int n, int i, int j) {
  const int lo = i + j - n - 1;
  return std::min(i, j) - (lo > 0 ? lo : 0);
}

}  // namespace spectra::test
