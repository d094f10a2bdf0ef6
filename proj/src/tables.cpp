#include "ktaxi/tables.hpp"

#include <map>

#include "ktaxi/tree.hpp"

namespace ktaxi {
namespace {

BigInt power(BigInt base, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

BigInt exact_div(const BigInt& num, const BigInt& den) {
  if (num % den != 0) throw Error("band value is not integral");
  return num / den;
}

}  // namespace

BigInt binomial(int n, int r) {
  if (r < 0 || n < 0 || r > n) return 0;
  BigInt out = 1;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

BigInt c_kd(int k, int d) {
  if (k < 0 || d < 0) throw Error("c_kd needs k, d >= 0");
  BigInt sum = 0;
  for (int h = 1; h <= std::min(k, d); ++h) sum += binomial(k, h);
  return sum;
}

BigInt c_kd_recurrence(int k, int d) {
  if (k < 0 || d < 0) throw Error("c_kd needs k, d >= 0");
  // row[i] = c_{i, level}
  std::vector<BigInt> row(k + 1, 0);
  for (int level = 1; level <= d; ++level) {
    std::vector<BigInt> next(k + 1);
    BigInt prefix = 0;
    for (int i = 0; i <= k; ++i) {
      next[i] = i + prefix;
      prefix += row[i];
    }
    row = std::move(next);
  }
  return row[k];
}

BandProperties check_band_properties(const BandTable& b) {
  BandProperties p;
  const int d = b.d, k = b.k;
  p.ordered = b.m[d - 1] == -1 && b.m[d - 1] < b.M[0];
  for (int i = 1; i < d; ++i) {
    p.ordered = p.ordered && b.m[i - 1] < b.m[i] && b.M[i - 1] < b.M[i];
  }
  p.constant_width = true;
  for (int i = 1; i < d; ++i) p.constant_width = p.constant_width && b.M[i] - b.m[i] == b.M[0] - b.m[0];
  p.top_slack = true;
  p.chain_slack = true;
  for (int j = 1; j <= k; ++j) {
    p.top_slack = p.top_slack && b.M[0] + (j - 1) * b.m[0] >= j;
    for (int i = 1; i < d; ++i) p.chain_slack = p.chain_slack && (j - 1) * b.m[i] - b.m[i - 1] >= j;
  }
  BigInt closed = k == 2 ? BigInt(4 * d - 1)
                         : exact_div(2 * k * power(k - 1, d) - 3 * k + 2, k - 2);
  p.closed_form_c = b.c == closed && b.c == b.M[d - 1];
  return p;
}

BandTable bands(int k, int d) {
  if (k < 2) throw Error("bands need k >= 2");
  if (d < 1) throw Error("bands need d >= 1");
  BandTable b;
  b.k = k;
  b.d = d;
  for (int i = 1; i <= d; ++i) {
    if (k == 2) {
      b.m.emplace_back(-2 * (d - i) - 1);
      b.M.emplace_back(2 * (d + i) - 1);
    } else {
      b.m.push_back(exact_div(-2 * power(k - 1, d - i + 1) + k, k - 2));
      b.M.push_back(exact_div(2 * k * power(k - 1, d) - 2 * power(k - 1, d - i + 1) - k, k - 2));
    }
  }
  b.c = b.M.back();
  if (!check_band_properties(b).all()) {
    throw Error("band table violates its defining properties for k=" + std::to_string(k) +
                " d=" + std::to_string(d));
  }
  return b;
}

std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw Error("value does not fit in 64 bits");
  }
  return v.convert_to<std::int64_t>();
}

}  // namespace ktaxi
