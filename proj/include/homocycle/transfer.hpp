#pragma once

#include <cmath>
#include <numeric>
#include <queue>
#include <vector>

#include <Eigen/Dense>

#include "homocycle/homology.hpp"

namespace homocycle {

template <typename Real>
using MatrixX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VectorX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// 0/1 transition matrix of the oriented double: A(i,j) = 1 iff symbol j may
// follow symbol i, i.e. the terminal vertex of i is the initial vertex of j.
// Backtracking (j = reversal of i) is allowed.
inline Eigen::MatrixXi transition_matrix(const SymbolTable& st) {
  Eigen::MatrixXi A = Eigen::MatrixXi::Zero(st.symbols, st.symbols);
  for (int i = 0; i < st.symbols; ++i) {
    for (int j = 0; j < st.symbols; ++j) {
      A(i, j) = (st.term[i] == st.init[j]) ? 1 : 0;
    }
  }
  return A;
}

struct Admissibility {
  bool irreducible = false;
  int period = 0;       // gcd of cycle lengths when irreducible
  bool aperiodic = false;
};

inline Admissibility check_admissibility(const Eigen::MatrixXi& A) {
  const int n = static_cast<int>(A.rows());
  auto reach = [&](bool transpose) {
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    seen[0] = 1;
    q.push(0);
    int cnt = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w = 0; w < n; ++w) {
        int a = transpose ? A(w, v) : A(v, w);
        if (a && !seen[w]) {
          seen[w] = 1;
          ++cnt;
          q.push(w);
        }
      }
    }
    return cnt == n;
  };
  Admissibility r;
  r.irreducible = reach(false) && reach(true);
  if (!r.irreducible) return r;

  // period = gcd over arcs (u,v) of dist(u) + 1 - dist(v), BFS levels from 0
  std::vector<int> dist(n, -1);
  std::queue<int> q;
  dist[0] = 0;
  q.push(0);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w = 0; w < n; ++w) {
      if (A(v, w) && dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
    }
  }
  long long g = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (A(u, v)) g = std::gcd(g, static_cast<long long>(dist[u] + 1 - dist[v]));
    }
  }
  r.period = static_cast<int>(g < 0 ? -g : g);
  r.aperiodic = (r.period == 1);
  return r;
}

// Weighted transfer matrix B(s,u)(i,j) = A(i,j) * exp(-s*l(j) + <u, f(j)>).
// Weights sit on the target symbol; source_convention moves them to the
// source, which is a similarity transform and leaves the spectrum unchanged.
template <typename Real>
MatrixX<Real> weighted_matrix(const SymbolTable& st, const HomologyLabeling& hl,
                              Real s, const VectorX<Real>& u,
                              bool source_convention = false) {
  const int N = st.symbols;
  VectorX<Real> w(N);
  for (int j = 0; j < N; ++j) {
    Real e = -s * static_cast<Real>(st.length_d[j]);
    for (int c = 0; c < hl.b; ++c) {
      if (hl.f[j][c] != 0) e += u[c] * static_cast<Real>(hl.f[j][c]);
    }
    using std::exp;
    w[j] = exp(e);
  }
  MatrixX<Real> B = MatrixX<Real>::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (st.term[i] == st.init[j]) B(i, j) = source_convention ? w[i] : w[j];
    }
  }
  return B;
}

template <typename Real>
struct PerronResult {
  Real lambda = 0;
  VectorX<Real> right;   // max entry 1
  int iterations = 0;
  Real gap = 0;          // final Collatz-Wielandt bracket width / lambda
};

// Power iteration on a nonnegative primitive matrix with no zero rows.  The
// Collatz-Wielandt ratios min_i (Bv)_i / v_i and max_i (Bv)_i / v_i bracket
// the Perron root at every step, which gives a rotation-free stopping rule;
// the returned value is the bracket midpoint.
template <typename Real>
PerronResult<Real> perron_power(const MatrixX<Real>& B, Real tol,
                                int maxit = 200000) {
  const int n = static_cast<int>(B.rows());
  VectorX<Real> v = VectorX<Real>::Constant(n, Real(1));
  PerronResult<Real> out;
  Real lo = 0, hi = 0, best_gap = -1;
  int stale = 0;
  for (int it = 1; it <= maxit; ++it) {
    VectorX<Real> w = B * v;
    lo = hi = w[0] / v[0];
    for (int i = 1; i < n; ++i) {
      Real r = w[i] / v[i];
      if (r < lo) lo = r;
      if (r > hi) hi = r;
    }
    Real scale = w.maxCoeff();
    v = w / scale;
    out.iterations = it;
    Real gap = (hi - lo) / hi;
    if (gap <= tol) break;
    if (best_gap < 0 || gap < best_gap * Real(0.999)) {
      best_gap = gap;
      stale = 0;
    } else if (++stale > 200) {
      break;  // rounding floor reached
    }
  }
  out.gap = (hi - lo) / hi;
  if (!(out.gap <= Real(1e-9)))
    throw InternalError("power iteration failed to converge");
  out.lambda = (lo + hi) / 2;
  out.right = v;
  return out;
}

struct PerronData {
  double lambda = 0;
  Eigen::VectorXd right, left;  // max(right) = 1, sum_i left_i right_i = 1
  int iterations = 0;
  double residual = 0;  // |B right - lambda right|_inf / lambda
};

inline PerronData perron(const Eigen::MatrixXd& B, double tol = 1e-14) {
  auto r = perron_power<double>(B, tol);
  auto l = perron_power<double>(Eigen::MatrixXd(B.transpose()), tol);
  PerronData out;
  out.right = r.right;
  out.left = l.right;
  out.iterations = r.iterations + l.iterations;
  // Rayleigh-type quotient averages out the residual error of both vectors.
  out.lambda = out.left.dot(B * out.right) / out.left.dot(out.right);
  out.left /= out.left.dot(out.right);
  out.residual =
      (B * out.right - out.lambda * out.right).cwiseAbs().maxCoeff() /
      out.lambda;
  return out;
}

// log of the Perron root of B(s,u); the long double path keeps the value
// smooth to ~1e-19, which finite differencing of fourth derivatives needs.
inline double pressure(const SymbolTable& st, const HomologyLabeling& hl,
                       double s, const Eigen::VectorXd& u) {
  return std::log(perron(weighted_matrix<double>(st, hl, s, u)).lambda);
}

inline long double pressure_precise(const SymbolTable& st,
                                    const HomologyLabeling& hl, long double s,
                                    const VectorX<long double>& u) {
  auto B = weighted_matrix<long double>(st, hl, s, u);
  auto r = perron_power<long double>(B, 1e-17L, 400000);
  return logl(r.lambda);
}

// Shift-invariant Markov measure of the weighted shift at parameter (s, u=0):
// transition kernel p(i,j) = B(i,j) v_j / (lambda v_i) and stationary vector
// mu_i = left_i right_i.  At s = entropy this is the equilibrium measure.
struct MarkovMeasure {
  double lambda = 0;
  Eigen::VectorXd mu;
  Eigen::MatrixXd p;

  double cylinder(const std::vector<int>& word) const {
    if (word.empty()) return 1.0;
    double acc = mu[word[0]];
    for (std::size_t k = 1; k < word.size(); ++k)
      acc *= p(word[k - 1], word[k]);
    return acc;
  }
};

inline MarkovMeasure markov_measure(const SymbolTable& st,
                                    const HomologyLabeling& hl, double s) {
  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(hl.b);
  auto B = weighted_matrix<double>(st, hl, s, u0);
  auto pd = perron(B);
  MarkovMeasure mm;
  mm.lambda = pd.lambda;
  const int N = st.symbols;
  mm.p = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (B(i, j) != 0.0)
        mm.p(i, j) = B(i, j) * pd.right[j] / (pd.lambda * pd.right[i]);
    }
    double rs = mm.p.row(i).sum();  // renormalize away residual roundoff
    mm.p.row(i) /= rs;
  }
  mm.mu = pd.left.cwiseProduct(pd.right);
  mm.mu /= mm.mu.sum();
  return mm;
}

// Mean edge length under the measure.
inline double mean_length(const MarkovMeasure& mm, const SymbolTable& st) {
  double acc = 0;
  for (int i = 0; i < st.symbols; ++i) acc += st.length_d[i] * mm.mu[i];
  return acc;
}

// n-step correlation moment  sum_{0<=p,q<n} int g_i(x_p) g_j(x_q) dmu  for
// per-symbol observables g_i, g_j, expanded as n*M(0) plus lagged terms
// (n-d) * (M_ij(d) + M_ji(d)), each lag evaluated by row-vector iteration.
inline double correlation_moment(const MarkovMeasure& mm,
                                 const Eigen::VectorXd& gi,
                                 const Eigen::VectorXd& gj, int n) {
  double m0 = mm.mu.cwiseProduct(gi).dot(gj);
  double acc = n * m0;
  Eigen::RowVectorXd xi = mm.mu.cwiseProduct(gi).transpose();
  Eigen::RowVectorXd xj = mm.mu.cwiseProduct(gj).transpose();
  for (int d = 1; d < n; ++d) {
    xi *= mm.p;
    xj *= mm.p;
    acc += (n - d) * (xi.dot(gj) + xj.dot(gi));
  }
  return acc;
}

inline Eigen::VectorXd label_observable(const HomologyLabeling& hl, int c,
                                        int symbols) {
  Eigen::VectorXd g(symbols);
  for (int s = 0; s < symbols; ++s) g[s] = hl.f[s][c];
  return g;
}

}  // namespace homocycle
