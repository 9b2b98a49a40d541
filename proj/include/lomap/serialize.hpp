#pragma once

#include <json.hpp>

#include "lomap/poly.hpp"
#include "lomap/qroot3.hpp"
#include "lomap/rational.hpp"
#include "lomap/series.hpp"

namespace lomap {

using json = nlohmann::json;

inline json to_json(const Rational& r) { return r.str(); }
inline Rational rational_from_json(const json& j) { return Rational::parse(j.get<std::string>()); }

inline json to_json(const QRoot3& x) { return json{{"a", x.a.str()}, {"b", x.b.str()}}; }
inline QRoot3 qroot3_from_json(const json& j) {
  return {rational_from_json(j.at("a")), rational_from_json(j.at("b"))};
}

/// Coefficient list, index = degree.
inline json to_json(const Poly<Rational>& p) {
  json a = json::array();
  for (const auto& c : p.coeffs()) a.push_back(c.str());
  return a;
}
inline Poly<Rational> qpoly_from_json(const json& j) {
  std::vector<Rational> v;
  for (const auto& c : j) v.push_back(rational_from_json(c));
  return Poly<Rational>(std::move(v));
}

/// {"terms": {exponent: coefficient}, "truncation": n | null}.
template <typename Scalar>
json series_to_json(const TruncLaurent<Scalar>& s) {
  json terms = json::object();
  for (std::size_t i = 0; i < s.stored().size(); ++i) {
    if (is_zero(s.stored()[i])) continue;
    terms[std::to_string(s.valuation() + static_cast<int>(i))] = to_json(s.stored()[i]);
  }
  json j{{"terms", terms}};
  j["truncation"] = s.is_exact() ? json(nullptr) : json(s.truncation());
  return j;
}

template <typename Scalar>
TruncLaurent<Scalar> series_from_json(const json& j) {
  using S = TruncLaurent<Scalar>;
  int trunc = j.at("truncation").is_null() ? S::kExact : j.at("truncation").get<int>();
  S acc = S::zero();
  for (const auto& [k, v] : j.at("terms").items()) {
    Scalar c;
    if constexpr (std::is_same_v<Scalar, QRoot3>)
      c = qroot3_from_json(v);
    else
      c = rational_from_json(v);
    acc += S::monomial(c, std::stoi(k));
  }
  return acc.truncated(trunc);
}

}  // namespace lomap
