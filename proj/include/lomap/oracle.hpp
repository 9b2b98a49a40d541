#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lomap/graded.hpp"
#include "lomap/poly.hpp"
#include "lomap/wick.hpp"

namespace lomap {

/// Z_N / <1>_N with t_k, k <= 3, through the given weight. Moments are cached per process.
GradedSeries3 zN_graded(int max_weight, WickMethod method = WickMethod::Memo, int threads = 0);
GradedSeries3 log_zN(int max_weight, WickMethod method = WickMethod::Memo, int threads = 0);

/// [x^V] L^(3)(x, N) = [x^V] 6x d/dx log Z at t_i = x delta_{i,3}, for even V <= v_max.
std::map<int, NPolynomial> map_series_oracle(int v_max, WickMethod method = WickMethod::Memo, int threads = 0);
/// Entry g is the coefficient of N^F with g = 2 + V/2 - F.
std::vector<Rational> genus_split(int V, const NPolynomial& coeff);

/// Common verification report.
struct VerifyReport {
  std::string check;
  std::string variant;
  int max_weight = 0;
  bool pass = false;
  std::optional<std::string> first_failure;
  std::optional<std::uint64_t> seed;
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// Both Virasoro constraints, monomials of weight <= max_weight.
VerifyReport verify_virasoro(int max_weight);

/// BKP variant: proof form (-3 d3 d1, prefactor 3/4) or statement form (+3 d3 d1, prefactor 3).
enum class BkpVariant { Proof, Statement };
VerifyReport verify_bkp(int max_weight, BkpVariant variant);

/// (Y11), (Y1111), (Y22), (Y13) coefficientwise in x through x^x_order.
VerifyReport verify_y_reductions(int x_order);

/// <1>_{N+2} <1>_{N-2} / <1>_N^2 = N(N-1).
NPolynomial mehta_ratio();
/// <1>_N from the Gamma-product closed form.
double mehta_norm_closed(int n);
/// <1>_N by nested Gauss-Kronrod quadrature over the ordered chamber; n <= 4.
double mehta_norm_quadrature(int n);

VerifyReport verify_pfaffian_det(int count, int max_dim, std::uint64_t seed);
VerifyReport verify_pfaffian_quadratic(int m, int n, std::uint64_t seed, bool zero_entries = false);
VerifyReport verify_pfaffian_derivative(int k, int dim);

}  // namespace lomap
