#pragma once

#include <cmath>
#include <random>

#include "model.hpp"

namespace clusterkin::test {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Log-uniform positive state, entries in [lo, hi].
inline StateVector random_state(std::mt19937_64& rng, double lo = 1e-6, double hi = 1e2) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  StateVector x;
  for (double& v : x) v = std::exp(u(rng));
  return x;
}

// Random state rescaled so that w.x = r_total.
inline StateVector random_partition(std::mt19937_64& rng, double r_total) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  StateVector x;
  for (double& v : x) v = u(rng);
  const double w = receptor_total(x);
  for (double& v : x) v *= r_total / w;
  return x;
}

// Values computed once with an independent scipy implementation of the
// printed network (LSODA relaxation followed by fsolve).
inline constexpr StateVector kOracleFullTable{
    0.06465081700782721,  0.23011723825325442, 0.7464722873799832,   1.241682923054211,
    0.0033583501192671877, 0.011070306967906288, 0.021004011983353627, 0.0368471205255101,
    0.017101246464956636, 0.02972450047066297,  0.38119841424965767,  0.671371139697537};

inline constexpr StateVector kOracleReducedBeta0{
    1.4970509652229804,  2.6925763344304965,  0.4588434752877703,   0.16550972670523414,
    0.02250454049159897, 0.04262357585574607, 0.019611301006954875, 0.0072939222457529445,
    0.016883276593442922, 0.006292672324432347, 0.36307036133716275, 0.1351175564988385};

// full, alpha 1, f 0.3, V0 5, beta 0.25
inline constexpr StateVector kOracleFullCorner{
    0.030430456819509386, 0.0710043992455219,  0.03367450036119469, 0.07857383417612095,
    0.0365410326120491,   0.08526240942811458, 0.04619543146186524, 0.10778934007768559,
    0.03721800546697578,  0.08684201275627684, 0.839426317994185,   1.9586614086530985};

// reduced, alpha 10, f 0.05, V0 0.01, beta 0.5
inline constexpr StateVector kOracleReducedCorner{
    1.4164993532611727,    3.022077513693561,    0.45634830891053074,   0.5400751985758383,
    0.0017258905680937824, 0.005184525596767344, 0.001468187684570025,  0.00250534425844611,
    0.0013502241838468725, 0.0020532297830577026, 0.027002394550336848, 0.046453470493576385};

}  // namespace clusterkin::test
