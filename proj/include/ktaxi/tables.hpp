#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ktaxi {

using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(int n, int r);

// Number of non-empty subsets of a k-set of size at most d.
BigInt c_kd(int k, int d);
// Same value through c_{k,d} = k + sum_{i<k} c_{i,d-1}, c_{k,0} = 0.
BigInt c_kd_recurrence(int k, int d);

// Slope bands for weighted trees; m[i-1], M[i-1] hold m_i, M_i for i = 1..d.
struct BandTable {
  int k = 0;
  int d = 0;
  std::vector<BigInt> m;
  std::vector<BigInt> M;
  BigInt c;  // = M_d

  const BigInt& lower(int depth) const { return m.at(depth - 1); }
  const BigInt& upper(int depth) const { return M.at(depth - 1); }
};

struct BandProperties {
  bool ordered = false;         // m_1 < ... < m_d = -1 < M_1 < ... < M_d
  bool constant_width = false;  // M_i - m_i independent of i
  bool top_slack = false;       // M_1 + (j-1) m_1 >= j, j = 1..k
  bool chain_slack = false;     // (j-1) m_{i+1} - m_i >= j, all j, i
  bool closed_form_c = false;   // c agrees with its closed form
  bool all() const { return ordered && constant_width && top_slack && chain_slack && closed_form_c; }
};

BandProperties check_band_properties(const BandTable& b);

// Builds the table and throws Error unless every property holds.
BandTable bands(int k, int d);

// Throws Error when the value does not fit.
std::int64_t to_int64(const BigInt& v);

}  // namespace ktaxi
