#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "homocycle/wick.hpp"

namespace homocycle {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class Mode { Literal, Normalized };

inline std::string mode_name(Mode m) {
  return m == Mode::Literal ? "paper-literal" : "normalized";
}
inline Mode mode_from_name(const std::string& s) {
  if (s == "paper-literal") return Mode::Literal;
  if (s == "normalized") return Mode::Normalized;
  throw ParseError("unknown mode '" + s + "'");
}

// Triangular factor with hess^{-1} = M M^T and det M > 0: from the Cholesky
// factorization hess = L L^T take M = L^{-T} (upper triangular, positive
// diagonal).  Deterministic, no sign or rotation ambiguity.
inline Eigen::MatrixXd factor_M(const Eigen::MatrixXd& hess) {
  Eigen::LLT<Eigen::MatrixXd> llt(hess);
  if (llt.info() != Eigen::Success)
    throw InternalError("covariance factorization failed");
  Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd M = L.transpose()
                          .triangularView<Eigen::Upper>()
                          .solve(Eigen::MatrixXd::Identity(L.rows(), L.cols()));
  return M;
}

struct WickParts {
  double E4 = 0;  // Gaussian moment of the quartic term
  double E6 = 0;  // Gaussian moment of the squared cubic term
  double Z = 0;   // Gaussian normalization (2pi)^{b/2} / sqrt(det hess)
};

// The order-1/T coefficient at class 0.  Literal mode reproduces the
// published closed-form normalization; normalized mode divides by (2pi)^b,
// consistent with the explicit c0 below.
inline double c1_constant(int b, double h, const Eigen::MatrixXd& hess,
                          const Tensor3& third, const Tensor4& fourth,
                          Mode mode, WickParts* parts = nullptr) {
  Eigen::MatrixXd M = factor_M(hess);
  Eigen::MatrixXd C = M * M.transpose();
  double detM = M.determinant();
  double E4 = gaussian_quartic_moment(C, fourth);
  double E6 = gaussian_sextic_moment(C, third, third);
  double Z = std::pow(kTwoPi, b / 2.0) * detM;
  double c10 = Z * ((-2.0 * E6 + 3.0 * E4) / (72.0 * h) -
                    (b + 2) / (2.0 * h * h));
  if (parts) *parts = WickParts{E4, E6, Z};
  return mode == Mode::Literal ? c10 : std::pow(kTwoPi, -b) * c10;
}

// Leading constant of the expansion; independent of the output mode (the
// census is its arbiter).
inline double c0_leading(int b, double h, const Eigen::MatrixXd& hess) {
  double detM = factor_M(hess).determinant();  // = 1/sqrt(det hess)
  return std::pow(kTwoPi, -b / 2.0) * detM / h;
}

// Class-quadratic coefficient matrix, computed from the factor M so that
// invariance under M -> M*Q (rotation Q) is structural.
inline Eigen::MatrixXd a_matrix_from_factor(int b, double h,
                                            const Eigen::MatrixXd& M,
                                            Mode mode) {
  Eigen::MatrixXd MMt = M * M.transpose();
  double detM = M.determinant();
  if (mode == Mode::Literal)
    return std::pow(kTwoPi, b / 2.0 + 2) / (2.0 * h) * detM * MMt;
  double c0 = std::pow(kTwoPi, -b / 2.0) * detM / h;
  return 0.5 * c0 * MMt;
}

inline Eigen::MatrixXd a_matrix(int b, double h, const Eigen::MatrixXd& hess,
                                Mode mode) {
  return a_matrix_from_factor(b, h, factor_M(hess), mode);
}

struct ExpansionReport {
  Mode mode = Mode::Normalized;
  int b = 0;
  double h = 0;
  double c0 = 0;        // mode-independent
  Eigen::MatrixXd a;    // mode-dependent
  double c10 = 0;       // mode-dependent
  Eigen::MatrixXd M;
  WickParts wick;
};

inline ExpansionReport build_expansion(const ThermoProfile& tp, Mode mode) {
  ExpansionReport rep;
  rep.mode = mode;
  rep.b = tp.b;
  rep.h = tp.h;
  rep.M = factor_M(tp.hess);
  rep.c0 = c0_leading(tp.b, tp.h, tp.hess);
  rep.a = a_matrix_from_factor(tp.b, tp.h, rep.M, mode);
  rep.c10 = c1_constant(tp.b, tp.h, tp.hess, tp.third, tp.fourth, mode,
                        &rep.wick);
  return rep;
}

// c1(alpha) = -alpha^T a alpha + c10, in the report's mode.
inline double c1_of_alpha(const ExpansionReport& rep,
                          const std::vector<int>& alpha) {
  if (static_cast<int>(alpha.size()) != rep.b)
    throw InternalError("class vector has wrong rank");
  Eigen::VectorXd al(rep.b);
  for (int i = 0; i < rep.b; ++i) al[i] = alpha[i];
  return -al.dot(rep.a * al) + rep.c10;
}

// ---------------------------------------------------------------------------
// Independent quadrature oracle for c10: evaluates the Gaussian integral of
// the quartic/cubic polynomial directly on a tensor-product Gauss-Hermite
// grid (Golub-Welsch nodes), with whitening from the eigendecomposition of
// hess — sharing no code path with the Wick contraction above.

struct GaussHermite {
  Eigen::VectorXd nodes, weights;  // for weight function e^{-x^2}
};

inline GaussHermite gauss_hermite(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double off = std::sqrt(k / 2.0);
    J(k - 1, k) = J(k, k - 1) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussHermite gh;
  gh.nodes = es.eigenvalues();
  gh.weights.resize(n);
  const double mu0 = std::sqrt(M_PI);
  for (int i = 0; i < n; ++i) {
    double q0 = es.eigenvectors()(0, i);
    gh.weights[i] = mu0 * q0 * q0;
  }
  return gh;
}

// integral over R^b of e^{-1/2 v^T hess v} F(v) dv
template <typename F>
double gaussian_integral(const Eigen::MatrixXd& hess, F&& f, int nodes) {
  const int b = static_cast<int>(hess.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
  Eigen::VectorXd lam = es.eigenvalues();
  Eigen::MatrixXd Q = es.eigenvectors();
  GaussHermite gh = gauss_hermite(nodes);
  double jac = 1.0;
  for (int i = 0; i < b; ++i) jac *= std::sqrt(2.0 / lam[i]);

  double acc = 0;
  std::vector<int> idx(b, 0);
  Eigen::VectorXd y(b);
  while (true) {
    double w = 1.0;
    for (int c = 0; c < b; ++c) {
      w *= gh.weights[idx[c]];
      y[c] = std::sqrt(2.0 / lam[c]) * gh.nodes[idx[c]];
    }
    acc += w * f(Eigen::VectorXd(Q * y));
    int c = 0;
    for (; c < b; ++c) {
      if (++idx[c] < nodes) break;
      idx[c] = 0;
    }
    if (c == b) break;
  }
  return acc * jac;
}

inline double c1_constant_quadrature(int b, double h,
                                     const Eigen::MatrixXd& hess,
                                     const Tensor3& third,
                                     const Tensor4& fourth, Mode mode,
                                     double tol = 1e-10) {
  auto F2 = [&](const Eigen::VectorXd& v) {
    double q2 = v.dot(hess * v);
    double q3 = 0, q4 = 0;
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j)
        for (int k = 0; k < b; ++k) {
          double t3 = third.at(i, j, k);
          if (t3 != 0.0) q3 += t3 * v[i] * v[j] * v[k];
          for (int l = 0; l < b; ++l) {
            double t4 = fourth.at(i, j, k, l);
            if (t4 != 0.0) q4 += t4 * v[i] * v[j] * v[k] * v[l];
          }
        }
    return (-2.0 * q3 * q3 + 3.0 * q4) / (72.0 * h) - q2 / (2.0 * h * h) -
           1.0 / (h * h);
  };
  int n = 8;
  double prev = gaussian_integral(hess, F2, n);
  for (; n <= 64; n *= 2) {
    double cur = gaussian_integral(hess, F2, 2 * n);
    if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) {
      prev = cur;
      break;
    }
    prev = cur;
  }
  return mode == Mode::Literal ? prev : std::pow(kTwoPi, -b) * prev;
}

// ---------------------------------------------------------------------------
// Published closed forms for the two worked topologies, evaluated verbatim
// from their printed expressions.  These deliberately do not share code with
// the engine: they are regression anchors, discrepancies included.

namespace detail {

// root of sum_of_weights(s) = 1 for strictly decreasing closed forms
template <typename G, typename DG>
double closed_form_root(G&& g, DG&& dg) {
  double lo = 0.0, hi = 1.0;
  while (g(hi) > 1.0) {
    hi *= 2.0;
    if (hi > 1e6) throw InternalError("closed-form root bracket failed");
  }
  double s = 0.5 * hi;
  for (int it = 0; it < 200; ++it) {
    double val = g(s) - 1.0;
    if (val > 0) lo = s; else hi = s;
    double snew = s - val / dg(s);
    if (!(snew > lo && snew < hi)) snew = 0.5 * (lo + hi);
    double moved = std::abs(snew - s);
    s = snew;
    if (moved <= 1e-16 * std::max(1.0, s)) break;
  }
  return s;
}

}  // namespace detail

// Rose with k loops: entropy solves 2*sum e^{-h l_i} = 1; the published
// fourth-order data and expansion constants in closed form.
struct RoseConstants {
  int k = 0;
  std::vector<double> lengths;
  double h = 0, W = 0, S2 = 0;           // W = sum l e^{-hl}, S2 = sum l^2 e^{-hl}
  std::vector<double> hess_diag;         // e^{-h l_i} / W
  std::vector<double> d_i;               // per-loop quartic coefficient
  Eigen::MatrixXd d_ij;                  // cross quartic coefficient (i != j)
  std::vector<double> beta4_diag;        // beta''''_iiii = 8 d_i e^{-2hl_i}/W
  Eigen::MatrixXd beta4_cross;           // beta''''_iijj = 24 d_ij e^{-h(li+lj)}/W
  double d1 = 0, d2 = 0;                 // sum_{i!=j} d_ij, sum_i d_i
  double xi = 0;
  std::vector<double> a_diag;            // xi * e^{h l_i}
  double c10 = 0;                        // in-text closed form, 1/(2 pi^2) prefactor
  double c10_alt_prefactor = 0;          // same with the 1/(2 pi) prefactor variant
  std::optional<double> k2_print;        // the printed k=2 specialization
};

inline RoseConstants rose_constants(const std::vector<double>& lengths) {
  RoseConstants rc;
  rc.k = static_cast<int>(lengths.size());
  rc.lengths = lengths;
  const int k = rc.k;
  auto g = [&](double s) {
    double acc = 0;
    for (double l : lengths) acc += std::exp(-s * l);
    return 2.0 * acc;
  };
  auto dg = [&](double s) {
    double acc = 0;
    for (double l : lengths) acc += -l * std::exp(-s * l);
    return 2.0 * acc;
  };
  rc.h = detail::closed_form_root(g, dg);
  double lsum = 0;
  for (double l : lengths) {
    rc.W += l * std::exp(-rc.h * l);
    rc.S2 += l * l * std::exp(-rc.h * l);
    lsum += l;
  }
  rc.hess_diag.resize(k);
  rc.d_i.resize(k);
  rc.beta4_diag.resize(k);
  rc.d_ij = Eigen::MatrixXd::Zero(k, k);
  rc.beta4_cross = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    double li = lengths[i];
    rc.hess_diag[i] = std::exp(-rc.h * li) / rc.W;
    rc.d_i[i] = (2.0 * std::exp(rc.h * li) - 12.0 * li / rc.W +
                 6.0 * rc.S2 / (rc.W * rc.W)) / 16.0;
    rc.beta4_diag[i] = 8.0 * rc.d_i[i] * std::exp(-2.0 * rc.h * li) / rc.W;
    rc.d2 += rc.d_i[i];
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      double dij = (rc.S2 / (rc.W * rc.W) -
                    (lengths[i] + lengths[j]) / rc.W) / 24.0;
      rc.d_ij(i, j) = dij;
      rc.beta4_cross(i, j) =
          24.0 * dij * std::exp(-rc.h * (lengths[i] + lengths[j])) / rc.W;
      rc.d1 += dij;
    }
  }
  rc.xi = std::pow(kTwoPi, k / 2.0 + 2) / (2.0 * rc.h) *
          std::sqrt(std::exp(rc.h * lsum)) * std::pow(rc.W, k / 2.0 + 1);
  rc.a_diag.resize(k);
  for (int i = 0; i < k; ++i) rc.a_diag[i] = rc.xi * std::exp(rc.h * lengths[i]);
  const double pi2 = M_PI * M_PI;
  rc.c10 = (rc.d1 + rc.d2) * rc.xi / (2.0 * pi2) -
           (k + 2) / (4.0 * rc.h * pi2) * rc.xi / rc.W;
  rc.c10_alt_prefactor = M_PI * rc.c10;
  if (k == 2) {
    double l1 = lengths[0], l2 = lengths[1], h = rc.h;
    double W = l1 * std::exp(-h * l1) + l2 * std::exp(-h * l2);
    rc.k2_print =
        (4.0 * std::pow(M_PI, 3) * std::sqrt(std::exp(h * (l1 + l2))) /
         (96.0 * h)) *
        ((108.0 + 12.0 * (std::exp(h * l1) + std::exp(h * l2))) * W * W -
         38.0 * l1 * l2 -
         63.0 * (l1 * l1 * std::exp(-h * l1) + l2 * l2 * std::exp(-h * l2)));
  }
  return rc;
}

// Two vertices, three edges forming two loops (one genuine loop of length l1
// plus a doubled edge of lengths l2, l3): entropy solves
// 2e^{-h l1} + (e^{-h l2} + e^{-h l3})^2 = 1.  The published constants use
// the unnormalized weights e^{-h l_i} as the measure values.
struct TwoLoopConstants {
  double l1 = 0, l2 = 0, l3 = 0;
  double h = 0;
  std::array<double, 6> mu_literal{};    // per symbol, x_i = e^{-h l_i}
  double rbar_literal = 0;               // 2 sum l_i x_i
  double c_prime = 0;                    // 1 / rbar_literal
  Eigen::Matrix2d hess_literal;          // c' * diag(2x1, (x2+x3)/2)
  double c = 0;                          // the published quadratic scale
  double a11 = 0, a22 = 0;               // published diagonal coefficients
};

inline TwoLoopConstants two_loop_constants(double l1, double l2, double l3) {
  TwoLoopConstants tl;
  tl.l1 = l1;
  tl.l2 = l2;
  tl.l3 = l3;
  auto g = [&](double s) {
    double x1 = std::exp(-s * l1);
    double y = std::exp(-s * l2) + std::exp(-s * l3);
    return 2.0 * x1 + y * y;
  };
  auto dg = [&](double s) {
    double x1 = std::exp(-s * l1);
    double y = std::exp(-s * l2) + std::exp(-s * l3);
    double yp = -l2 * std::exp(-s * l2) - l3 * std::exp(-s * l3);
    return -2.0 * l1 * x1 + 2.0 * y * yp;
  };
  tl.h = detail::closed_form_root(g, dg);
  double x1 = std::exp(-tl.h * l1);
  double x2 = std::exp(-tl.h * l2);
  double x3 = std::exp(-tl.h * l3);
  tl.mu_literal = {x1, x1, x2, x2, x3, x3};
  tl.rbar_literal = 2.0 * (l1 * x1 + l2 * x2 + l3 * x3);
  tl.c_prime = 1.0 / tl.rbar_literal;
  tl.hess_literal << 2.0 * x1, 0.0, 0.0, 0.5 * (x2 + x3);
  tl.hess_literal *= tl.c_prime;
  double root = std::sqrt(x1 * x2 + x1 * x3);
  tl.c = 8.0 * std::pow(M_PI, 3) *
         std::pow(l1 * x1 + l2 * x2 + l3 * x3, 2) / (tl.h * root);
  tl.a11 = tl.c * std::exp(tl.h * l1);
  tl.a22 = 4.0 * tl.c * std::exp(tl.h * (l2 + l3)) /
           (std::exp(tl.h * l2) + std::exp(tl.h * l3));
  return tl;
}

// ---------------------------------------------------------------------------
// Topology detectors for attaching the closed-form sections to reports.

inline std::optional<std::vector<double>> as_rose(const MultiGraph& g) {
  if (g.vertex_count() != 1) return std::nullopt;
  std::vector<double> lengths;
  for (const Edge& e : g.edges()) lengths.push_back(e.length.to_double());
  return lengths;
}

// Returns (l1 = loop, l2, l3 = doubled edge) when the graph is two vertices
// with one loop and two parallel connecting edges.
inline std::optional<std::array<double, 3>> as_two_loop(const MultiGraph& g) {
  if (g.vertex_count() != 2 || g.edge_count() != 3) return std::nullopt;
  std::vector<double> par;
  std::vector<double> loop;
  for (const Edge& e : g.edges()) {
    if (e.ends[0] == e.ends[1]) loop.push_back(e.length.to_double());
    else par.push_back(e.length.to_double());
  }
  if (loop.size() != 1 || par.size() != 2) return std::nullopt;
  return std::array<double, 3>{loop[0], par[0], par[1]};
}

}  // namespace homocycle
