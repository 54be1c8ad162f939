#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "homocycle/errors.hpp"

namespace homocycle {

// Central finite-difference engine for mixed partial derivatives up to total
// order four.  Per coordinate, an order-k derivative is built by composing
// fourth-order-accurate stencils (k=3 as D1*D2, k=4 as D2*D2), the composite
// is formed as a tensor product across coordinates, and the whole estimate is
// Richardson-extrapolated from steps h and h/2.  Evaluations are cached on a
// half-step lattice so both extrapolation levels and all requested partials
// share function calls.
class PartialEngine {
 public:
  using Fn = std::function<double(const Eigen::VectorXd&)>;

  PartialEngine(Fn f, Eigen::VectorXd x0, Eigen::VectorXd steps)
      : f_(std::move(f)), x0_(std::move(x0)), steps_(std::move(steps)) {
    if (x0_.size() != steps_.size())
      throw InternalError("PartialEngine: size mismatch");
    for (int i = 0; i < steps_.size(); ++i) {
      if (!(steps_[i] > 0)) throw InternalError("PartialEngine: bad step");
    }
  }

  // orders[c] = derivative order in coordinate c (0..4), total at most 4.
  double partial(const std::vector<int>& orders) {
    double coarse = single(orders, 1);
    double fine = single(orders, 2);
    return (16.0 * fine - coarse) / 15.0;
  }

  // One composite-stencil estimate at step h/halver, no extrapolation.
  double single(const std::vector<int>& orders, int halver) {
    const int d = static_cast<int>(x0_.size());
    if (static_cast<int>(orders.size()) != d)
      throw InternalError("PartialEngine: orders size mismatch");
    int total = 0;
    for (int k : orders) total += k;
    if (total > 4) throw InternalError("PartialEngine: order above four");

    std::vector<std::vector<Tap>> co(d);
    double denom = 1.0;
    for (int c = 0; c < d; ++c) {
      double h = steps_[c] / halver;
      std::vector<Tap> acc{{0, 1.0}};
      auto apply = [&](const std::vector<Tap>& stencil, int hpow) {
        acc = convolve(acc, stencil);
        for (int p = 0; p < hpow; ++p) denom *= h;
      };
      switch (orders[c]) {
        case 0: break;
        case 1: apply(d1_taps(), 1); break;
        case 2: apply(d2_taps(), 2); break;
        case 3: apply(d1_taps(), 1); apply(d2_taps(), 2); break;
        case 4: apply(d2_taps(), 2); apply(d2_taps(), 2); break;
        default: throw InternalError("PartialEngine: bad per-axis order");
      }
      co[c] = acc;
    }

    double total_sum = 0;
    std::vector<int> halfoff(d, 0);
    accumulate(co, 0, 1.0, halfoff, halver, total_sum);
    return total_sum / denom;
  }

  int evaluations() const { return static_cast<int>(cache_.size()); }

 private:
  struct Tap {
    int off;
    double w;
  };

  static const std::vector<Tap>& d1_taps() {
    static const std::vector<Tap> t = {
        {-2, 1.0 / 12}, {-1, -8.0 / 12}, {1, 8.0 / 12}, {2, -1.0 / 12}};
    return t;
  }
  static const std::vector<Tap>& d2_taps() {
    static const std::vector<Tap> t = {{-2, -1.0 / 12},
                                       {-1, 16.0 / 12},
                                       {0, -30.0 / 12},
                                       {1, 16.0 / 12},
                                       {2, -1.0 / 12}};
    return t;
  }

  static std::vector<Tap> convolve(const std::vector<Tap>& a,
                                   const std::vector<Tap>& b) {
    std::map<int, double> acc;
    for (const Tap& x : a) {
      for (const Tap& y : b) acc[x.off + y.off] += x.w * y.w;
    }
    std::vector<Tap> out;
    for (auto& [off, w] : acc) {
      if (w != 0.0) out.push_back({off, w});
    }
    return out;
  }

  void accumulate(const std::vector<std::vector<Tap>>& co, int c, double w,
                  std::vector<int>& halfoff, int halver, double& total) {
    if (c == static_cast<int>(co.size())) {
      total += w * eval(halfoff);
      return;
    }
    for (const Tap& t : co[c]) {
      // offsets are in units of step/halver; the cache key is in half-steps
      halfoff[c] = t.off * (2 / halver);
      accumulate(co, c + 1, w * t.w, halfoff, halver, total);
    }
    halfoff[c] = 0;
  }

  double eval(const std::vector<int>& halfoff) {
    auto it = cache_.find(halfoff);
    if (it != cache_.end()) return it->second;
    Eigen::VectorXd x = x0_;
    for (int c = 0; c < x.size(); ++c) x[c] += halfoff[c] * steps_[c] / 2.0;
    double v = f_(x);
    cache_.emplace(halfoff, v);
    return v;
  }

  Fn f_;
  Eigen::VectorXd x0_;
  Eigen::VectorXd steps_;
  std::map<std::vector<int>, double> cache_;
};

}  // namespace homocycle
