#pragma once

// Test-side reference computations, written straight from the definitions
// and sharing no code with the library paths they check.

#include "margo/lattice.hpp"
#include "margo/measure.hpp"
#include "margo/signed.hpp"

#include <map>
#include <string>
#include <vector>

namespace support {

using margo::Rational;

inline Rational q(long p, long d = 1) { return margo::ratio(p, d); }

// Sum over joint atoms whose label components on `coords` spell the key.
inline std::map<std::string, Rational> marginal_by_label(const margo::Measure& m, const margo::CoordSet& coords) {
  std::map<std::string, Rational> out;
  const auto& factors = m.space().factors();
  std::vector<std::size_t> strides(factors.size(), 1);
  for (std::size_t f = factors.size(); f-- > 1;) strides[f - 1] = strides[f] * factors[f].second.size();
  for (std::size_t a = 0; a < m.size(); ++a) {
    std::string key;
    bool first = true;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      if (!coords.contains(factors[f].first)) continue;
      std::size_t idx = a / strides[f] % factors[f].second.size();
      if (!first) key += '|';
      key += factors[f].second.label(idx);
      first = false;
    }
    out[key] += m[a];
  }
  return out;
}

inline std::map<std::string, Rational> by_label(const margo::Measure& m) {
  std::map<std::string, Rational> out;
  for (std::size_t a = 0; a < m.size(); ++a) out[m.space().label(a)] += m[a];
  return out;
}

inline bool same_measure(const std::map<std::string, Rational>& a, const std::map<std::string, Rational>& b) {
  auto clean = [](const std::map<std::string, Rational>& m) {
    std::map<std::string, Rational> out;
    for (const auto& [k, v] : m) {
      if (sgn(v) != 0) out[k] = v;
    }
    return out;
  };
  return clean(a) == clean(b);
}

inline bool marginals_match(const margo::MarginalFamily& family, const margo::Measure& joint) {
  for (const auto& member : family.members()) {
    if (!same_measure(marginal_by_label(joint, member.coords), by_label(member.measure))) return false;
  }
  return true;
}

using Dense = std::vector<std::vector<Rational>>;

inline Dense dense(const margo::RationalMatrix& m) {
  Dense out(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m.at(r, c);
  }
  return out;
}

inline Dense multiply(const Dense& a, const Dense& b, std::size_t inner, std::size_t cols) {
  Dense out(a.size(), std::vector<Rational>(cols));
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t k = 0; k < inner; ++k) out[r][c] += a[r][k] * b[k][c];
    }
  }
  return out;
}

// ||Mx|| = ||x|| for every basis vector, nonnegative entries, one nonzero per row.
inline bool isometric(const margo::LatticeMap& map) {
  const auto& m = map.matrix();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    int nonzero = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m.at(r, c) < 0) return false;
      if (sgn(m.at(r, c)) != 0) ++nonzero;
    }
    if (nonzero > 1) return false;
  }
  for (std::size_t c = 0; c < m.cols(); ++c) {
    margo::Vector e(m.cols());
    e[c] = 1;
    margo::Vector image(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) image[r] = m.at(r, c);
    Rational lhs;
    for (std::size_t r = 0; r < m.rows(); ++r) lhs += map.target().weights()[r] * abs(image[r]);
    if (lhs != map.source().weights()[c]) return false;
  }
  return true;
}

// max over basis vectors of ||M e_a|| / ||e_a||, which is the L1 operator norm.
inline Rational operator_norm(const margo::LatticeMap& map) {
  Rational best;
  const auto& m = map.matrix();
  for (std::size_t c = 0; c < m.cols(); ++c) {
    Rational mass;
    for (std::size_t r = 0; r < m.rows(); ++r) mass += map.target().weights()[r] * abs(m.at(r, c));
    Rational ratio = mass / map.source().weights()[c];
    if (ratio > best) best = ratio;
  }
  return best;
}

inline Rational l1_norm(const margo::AtomicL1& space, const margo::Vector& x) {
  Rational total;
  for (std::size_t a = 0; a < x.size(); ++a) total += space.weights()[a] * abs(x[a]);
  return total;
}

}  // namespace support
