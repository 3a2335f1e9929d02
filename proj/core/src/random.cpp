#include "fedtrace/random.hpp"

#include <array>
#include <vector>

namespace fedtrace {

namespace {

constexpr std::array<std::array<int, 2>, 12> kPool{{{1, 1},
                                                    {-1, 1},
                                                    {1, 2},
                                                    {-1, 2},
                                                    {2, 1},
                                                    {-2, 1},
                                                    {1, 3},
                                                    {-2, 3},
                                                    {3, 2},
                                                    {-3, 4},
                                                    {1, 5},
                                                    {3, 1}}};

}  // namespace

int RandomSource::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

Rational RandomSource::rational() {
  const auto& p = kPool[static_cast<std::size_t>(integer(0, static_cast<int>(kPool.size()) - 1))];
  return Rational(p[0], p[1]);
}

JetPoly RandomSource::jet_poly(int n, int max_degree, int terms, int jet_order) {
  JetPoly out(Rational(0), n, jet_order);
  for (int t = 0; t < terms; ++t) {
    Exponents alpha;
    const int degree = integer(0, max_degree);
    for (int d = 0; d < degree; ++d) alpha[integer(0, n - 1)] += 1;
    out += JetPoly::monomial(alpha, rational(), n, jet_order);
  }
  return out;
}

TrigPoly RandomSource::trig_poly(int n, int max_frequency, int modes) {
  TrigPoly out(Rational(0), n);
  for (int t = 0; t < modes; ++t) {
    Frequency k;
    for (int i = 0; i < n; ++i) k[i] = static_cast<std::int8_t>(integer(-max_frequency, max_frequency));
    if (coin())
      out += TrigPoly::cos_mode(k, rational(), n);
    else
      out += TrigPoly::sin_mode(k, rational(), n);
  }
  return out;
}

ProfileRing RandomSource::profile(int max_degree, int max_frequency, int modes) {
  ProfileRing out;
  for (int t = 0; t < modes; ++t) {
    std::vector<Rational> c(static_cast<std::size_t>(integer(0, max_degree) + 1));
    c.back() = rational();
    const int h = integer(0, max_frequency);
    if (coin())
      out += ProfileRing::cos_theta(h, UPoly(c));
    else
      out += ProfileRing::sin_theta(h, UPoly(c));
  }
  return out;
}

}  // namespace fedtrace
