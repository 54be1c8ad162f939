#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "homocycle/fd.hpp"
#include "homocycle/transfer.hpp"

namespace homocycle {

// Dense symmetric tensors over the b homology coordinates.
struct Tensor3 {
  int b = 0;
  std::vector<double> v;
  explicit Tensor3(int bb = 0) : b(bb), v(static_cast<std::size_t>(bb) * bb * bb, 0.0) {}
  double& ref(int i, int j, int k) { return v[(static_cast<std::size_t>(i) * b + j) * b + k]; }
  double at(int i, int j, int k) const {
    return v[(static_cast<std::size_t>(i) * b + j) * b + k];
  }
  void set_sym(int i, int j, int k, double val) {
    int idx[3] = {i, j, k};
    std::sort(idx, idx + 3);
    do {
      ref(idx[0], idx[1], idx[2]) = val;
    } while (std::next_permutation(idx, idx + 3));
  }
  double max_abs() const {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
};

struct Tensor4 {
  int b = 0;
  std::vector<double> v;
  explicit Tensor4(int bb = 0)
      : b(bb), v(static_cast<std::size_t>(bb) * bb * bb * bb, 0.0) {}
  double& ref(int i, int j, int k, int l) {
    return v[((static_cast<std::size_t>(i) * b + j) * b + k) * b + l];
  }
  double at(int i, int j, int k, int l) const {
    return v[((static_cast<std::size_t>(i) * b + j) * b + k) * b + l];
  }
  void set_sym(int i, int j, int k, int l, double val) {
    int idx[4] = {i, j, k, l};
    std::sort(idx, idx + 4);
    do {
      ref(idx[0], idx[1], idx[2], idx[3]) = val;
    } while (std::next_permutation(idx, idx + 4));
  }
  double max_abs() const {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
};

namespace detail {

// Newton with a bisection bracket on s -> P(s,u), strictly decreasing with
// P(0,u) > 0 for admissible graphs.  The derivative is the exact measure
// formula dP/ds = -sum_j l_j left_j right_j / <left,right>, and the last
// steps run on the extended-precision pressure so the root is accurate to
// the rounding of the returned double.
inline double pressure_root(const SymbolTable& st, const HomologyLabeling& hl,
                            const Eigen::VectorXd& u, double hint = -1.0) {
  auto P = [&](double s) {
    VectorX<long double> uld = u.cast<long double>();
    return pressure_precise(st, hl, static_cast<long double>(s), uld);
  };
  auto mean_r = [&](double s) {
    auto B = weighted_matrix<double>(st, hl, s, u);
    auto pd = perron(B);
    double num = 0, den = pd.left.dot(pd.right);
    for (int j = 0; j < st.symbols; ++j)
      num += st.length_d[j] * pd.left[j] * pd.right[j];
    return num / den;
  };

  double lo = 0.0, hi = (hint > 0 ? 2.0 * hint : 1.0);
  while (P(hi) > 0) {
    hi *= 2.0;
    if (hi > 1e6) throw InternalError("entropy bracket failed");
  }
  double s = (hint > 0 && hint < hi) ? hint : 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    long double val = P(s);
    if (val > 0) lo = s; else hi = s;
    double rb = mean_r(s);
    double step = static_cast<double>(val) / rb;
    double snew = s + step;
    if (!(snew > lo && snew < hi)) snew = 0.5 * (lo + hi);
    double moved = std::abs(snew - s);
    s = snew;
    if (moved <= 1e-16 * std::max(1.0, std::abs(s))) break;
  }
  return s;
}

}  // namespace detail

// Entropy: the root of P(s, 0) = 0.
inline double solve_entropy(const SymbolTable& st, const HomologyLabeling& hl) {
  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(hl.b);
  double h = detail::pressure_root(st, hl, u0);
  if (std::abs(pressure(st, hl, h, u0)) > 1e-12)
    throw InternalError("entropy residual above tolerance");
  return h;
}

// beta(u): the root in s of P(s, u) = 0.
inline double solve_beta(const SymbolTable& st, const HomologyLabeling& hl,
                         const Eigen::VectorXd& u, double hint = -1.0) {
  return detail::pressure_root(st, hl, u, hint);
}

// Finite-difference table of pressure partials at (h, 0), orders <= 4.
struct PressureTable {
  int b = 0;
  double h = 0, rbar = 0;      // rbar from the equilibrium measure, not FD
  double Ps = 0, Pss = 0;      // Ps kept as FD evidence; assembly uses -rbar
  Eigen::VectorXd Pu, Psu;
  Eigen::MatrixXd Puu, Psuu;
  Tensor3 Puuu;
  Tensor4 Puuuu;
  double step_s = 0, step_u = 0;
};

inline PressureTable pressure_derivatives(const SymbolTable& st,
                                          const HomologyLabeling& hl, double h,
                                          double step_u = 0.05,
                                          double step_s = 0.025) {
  const int b = hl.b;
  auto mm = markov_measure(st, hl, h);
  double rbar = mean_length(mm, st);

  auto f = [&](const Eigen::VectorXd& x) {
    VectorX<long double> uld(b);
    for (int c = 0; c < b; ++c) uld[c] = static_cast<long double>(x[c + 1]);
    return static_cast<double>(
        pressure_precise(st, hl, static_cast<long double>(x[0]), uld));
  };
  Eigen::VectorXd x0(b + 1);
  x0[0] = h;
  x0.tail(b).setZero();

  double su = step_u, ss = step_s;
  for (int attempt = 0;; ++attempt) {
    Eigen::VectorXd steps(b + 1);
    steps[0] = ss;
    steps.tail(b).setConstant(su);
    PartialEngine eng(f, x0, steps);

    // calibration: exact first-order values are known (Ps = -rbar, Pu = 0)
    std::vector<int> ord(b + 1, 0);
    ord[0] = 1;
    double Ps = eng.partial(ord);
    bool ok = std::abs(Ps + rbar) <= 1e-7 * std::max(1.0, rbar);
    Eigen::VectorXd Pu(b);
    for (int i = 0; i < b && ok; ++i) {
      std::fill(ord.begin(), ord.end(), 0);
      ord[i + 1] = 1;
      Pu[i] = eng.partial(ord);
      ok = std::abs(Pu[i]) <= 1e-7;
    }
    if (!ok) {
      if (attempt >= 3)
        throw InternalError("derivative-step calibration failed");
      su *= 0.5;
      ss *= 0.5;
      continue;
    }
    for (int i = 0; i < b; ++i) {
      std::fill(ord.begin(), ord.end(), 0);
      ord[i + 1] = 1;
      Pu[i] = eng.partial(ord);
    }

    PressureTable t;
    t.b = b;
    t.h = h;
    t.rbar = rbar;
    t.step_s = ss;
    t.step_u = su;
    t.Ps = Ps;
    t.Pu = Pu;
    auto part = [&](int s_order, std::initializer_list<int> us) {
      std::vector<int> o(b + 1, 0);
      o[0] = s_order;
      for (int c : us) o[c + 1] += 1;
      return eng.partial(o);
    };
    t.Pss = part(2, {});
    t.Psu.resize(b);
    t.Puu.resize(b, b);
    t.Psuu.resize(b, b);
    for (int i = 0; i < b; ++i) {
      t.Psu[i] = part(1, {i});
      for (int j = i; j < b; ++j) {
        t.Puu(i, j) = t.Puu(j, i) = part(0, {i, j});
        t.Psuu(i, j) = t.Psuu(j, i) = part(1, {i, j});
      }
    }
    t.Puuu = Tensor3(b);
    t.Puuuu = Tensor4(b);
    for (int i = 0; i < b; ++i) {
      for (int j = i; j < b; ++j) {
        for (int k = j; k < b; ++k) {
          t.Puuu.set_sym(i, j, k, part(0, {i, j, k}));
          for (int l = k; l < b; ++l)
            t.Puuuu.set_sym(i, j, k, l, part(0, {i, j, k, l}));
        }
      }
    }
    return t;
  }
}

// Taylor data of beta at u = 0, assembled from the pressure table by implicit
// differentiation of P(beta(u), u) = 0.  With rbar = -P_s:
//   beta'   = P_u / rbar                            (zero by reversal symmetry)
//   beta''  = P_uu / rbar
//   beta''' = (P_uuu + sum_3 P_su beta'') / rbar    (zero in practice)
//   beta'''' = (P_uuuu + P_ss * sum_3 beta'' beta''
//               + sum_6 P_suu beta'' + sum_4 P_su beta''') / rbar
struct ThermoProfile {
  int b = 0;
  double h = 0, rbar = 0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  Tensor3 third;
  Tensor4 fourth;
};

inline ThermoProfile assemble_beta(const PressureTable& t) {
  const int b = t.b;
  ThermoProfile tp;
  tp.b = b;
  tp.h = t.h;
  tp.rbar = t.rbar;
  tp.grad = t.Pu / t.rbar;
  tp.hess = t.Puu / t.rbar;
  tp.third = Tensor3(b);
  for (int i = 0; i < b; ++i) {
    for (int j = i; j < b; ++j) {
      for (int k = j; k < b; ++k) {
        double val = t.Puuu.at(i, j, k) + t.Psu[i] * tp.hess(j, k) +
                     t.Psu[j] * tp.hess(i, k) + t.Psu[k] * tp.hess(i, j);
        tp.third.set_sym(i, j, k, val / t.rbar);
      }
    }
  }
  tp.fourth = Tensor4(b);
  for (int i = 0; i < b; ++i) {
    for (int j = i; j < b; ++j) {
      for (int k = j; k < b; ++k) {
        for (int l = k; l < b; ++l) {
          double pair3 = tp.hess(i, j) * tp.hess(k, l) +
                         tp.hess(i, k) * tp.hess(j, l) +
                         tp.hess(i, l) * tp.hess(j, k);
          double six = t.Psuu(i, j) * tp.hess(k, l) +
                       t.Psuu(i, k) * tp.hess(j, l) +
                       t.Psuu(i, l) * tp.hess(j, k) +
                       t.Psuu(j, k) * tp.hess(i, l) +
                       t.Psuu(j, l) * tp.hess(i, k) +
                       t.Psuu(k, l) * tp.hess(i, j);
          double four = t.Psu[i] * tp.third.at(j, k, l) +
                        t.Psu[j] * tp.third.at(i, k, l) +
                        t.Psu[k] * tp.third.at(i, j, l) +
                        t.Psu[l] * tp.third.at(i, j, k);
          double val = t.Puuuu.at(i, j, k, l) + t.Pss * pair3 + six + four;
          tp.fourth.set_sym(i, j, k, l, val / t.rbar);
        }
      }
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(tp.hess);
  if (llt.info() != Eigen::Success)
    throw InternalError("class covariance is not positive definite");
  return tp;
}

inline ThermoProfile beta_derivatives(const SymbolTable& st,
                                      const HomologyLabeling& hl,
                                      double step_u = 0.05,
                                      double step_s = 0.025) {
  double h = solve_entropy(st, hl);
  return assemble_beta(pressure_derivatives(st, hl, h, step_u, step_s));
}

// Same tensors by direct finite differences of u -> beta(u); slower, used as
// the arbitration cross-check for the assembled values.
inline ThermoProfile beta_fd_direct(const SymbolTable& st,
                                    const HomologyLabeling& hl,
                                    double step_u = 0.05) {
  const int b = hl.b;
  double h = solve_entropy(st, hl);
  auto mm = markov_measure(st, hl, h);

  auto f = [&](const Eigen::VectorXd& u) { return solve_beta(st, hl, u, h); };
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(b);
  Eigen::VectorXd steps = Eigen::VectorXd::Constant(b, step_u);
  PartialEngine eng(f, x0, steps);

  ThermoProfile tp;
  tp.b = b;
  tp.h = h;
  tp.rbar = mean_length(mm, st);
  tp.grad.resize(b);
  tp.hess.resize(b, b);
  tp.third = Tensor3(b);
  tp.fourth = Tensor4(b);
  auto part = [&](std::initializer_list<int> us) {
    std::vector<int> o(b, 0);
    for (int c : us) o[c] += 1;
    return eng.partial(o);
  };
  for (int i = 0; i < b; ++i) {
    tp.grad[i] = part({i});
    for (int j = i; j < b; ++j) {
      tp.hess(i, j) = tp.hess(j, i) = part({i, j});
      for (int k = j; k < b; ++k) {
        tp.third.set_sym(i, j, k, part({i, j, k}));
        for (int l = k; l < b; ++l)
          tp.fourth.set_sym(i, j, k, l, part({i, j, k, l}));
      }
    }
  }
  return tp;
}

}  // namespace homocycle
