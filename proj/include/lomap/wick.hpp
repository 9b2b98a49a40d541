#pragma once

#include <cstdint>
#include <vector>

#include "lomap/poly.hpp"

namespace lomap {

/// How the Gaussian pairing sum is evaluated.
enum class WickMethod {
  /// Contraction with memoization on (unmatched factors, open index partition).
  Memo,
  /// Every perfect matching and every delta resolution, loops by union-find.
  Enumerate,
};

constexpr int kWickMemoLimit = 20;
constexpr int kWickEnumerateLimit = 18;

struct WickStats {
  /// Perfect matchings visited (Enumerate only).
  std::uint64_t matchings = 0;
  /// Leaves visited, matchings times resolutions (Enumerate only).
  std::uint64_t resolutions = 0;
  /// Memo entries created (Memo only).
  std::uint64_t states = 0;
};

/// <prod_j tr M^{k_j}> / <1> for the real symmetric Gaussian with
/// <M_ij M_kl> = d_ik d_jl + d_il d_jk, as a polynomial in N.
/// Throws SizeLimit past the method's half-edge bound.
NPolynomial wick_moment(const std::vector<int>& ks, WickMethod method = WickMethod::Memo, int threads = 0,
                        WickStats* stats = nullptr);

}  // namespace lomap
