#pragma once

#include <nlohmann/json.hpp>

#include "cxmetric/types.hpp"

namespace cxmetric {

/// Complex vectors serialize as [[re, im], ...].
inline nlohmann::json vector_to_json(const CVec& v) {
  auto out = nlohmann::json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back({v(k).real(), v(k).imag()});
  return out;
}

inline CVec vector_from_json(const nlohmann::json& j) {
  CVec out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = Complex(j[k].at(0).get<double>(), j[k].at(1).get<double>());
  }
  return out;
}

}  // namespace cxmetric
