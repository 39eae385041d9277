#pragma once

#include "oracles.hpp"

#include <expsamp/operators.hpp>
#include <expsamp/signal.hpp>

#include <algorithm>

namespace fixtures {

inline expsamp::Signal to_signal(const oracle::Pwl& p, const std::string& name = "pwl") {
  const auto [mn, mx] = std::minmax_element(p.vs.begin(), p.vs.end());
  return expsamp::Signal(name, p, expsamp::Interval{p.lo, p.hi}, expsamp::Interval{*mn, *mx},
                         p.nodes());
}

inline oracle::Setup bspline_fejer_setup() {
  oracle::Setup s;
  s.phi = oracle::b2;
  s.psi = oracle::fejer_pi0;
  return s;
}

// B_2 sampling kernel with the Fejer integral kernel, acting on u in `domain`.
inline expsamp::OperatorParams default_pair_params(int n, std::optional<expsamp::Interval> domain) {
  expsamp::OperatorParams p(n, expsamp::mellin_bspline(2), expsamp::mellin_fejer(oracle::pi, 0.0));
  p.domain = domain;
  return p;
}

}  // namespace fixtures
