#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "homocycle/expansion.hpp"
#include "homocycle/transfer.hpp"

namespace homocycle {

// Distinct edge-length values (exact), with each symbol mapped to its class.
// Usage vectors are keyed by value, not by edge id, so coinciding lengths
// share a bucket coordinate.
struct LengthClasses {
  std::vector<ExactLength> values;
  std::vector<double> values_d;
  std::vector<int> of_symbol;

  int count() const { return static_cast<int>(values.size()); }

  static LengthClasses build(const SymbolTable& st) {
    LengthClasses lc;
    lc.of_symbol.resize(st.symbols);
    for (int s = 0; s < st.symbols; ++s) {
      int found = -1;
      for (int k = 0; k < static_cast<int>(lc.values.size()); ++k) {
        if (lc.values[k] == st.length[s]) {
          found = k;
          break;
        }
      }
      if (found < 0) {
        found = static_cast<int>(lc.values.size());
        lc.values.push_back(st.length[s]);
        lc.values_d.push_back(st.length_d[s]);
      }
      lc.of_symbol[s] = found;
    }
    return lc;
  }

  ExactLength min_value() const {
    ExactLength m = values[0];
    for (const auto& v : values) {
      if (compare(v, m) < 0) m = v;
    }
    return m;
  }
};

struct CensusOptions {
  int nmax = 0;
  double budget_mb = 2048.0;
  int threads = 0;  // 0 = hardware default, capped by HOMOCYCLE_THREADS
};

// Bucket key: the b class coordinates followed by the L usage counts.
using BucketKey = std::vector<int>;
using BucketMap = std::map<BucketKey, bigint>;

struct CensusTable {
  int b = 0;
  int nmax = 0;
  LengthClasses classes;
  std::vector<BucketMap> fix;     // index = period, [0] unused
  std::vector<BucketMap> prim;    // primitive fixed points
  std::vector<BucketMap> orbits;  // prim / period

  bigint fix_total(int n) const {
    bigint acc = 0;
    for (const auto& [k, v] : fix[n]) acc += v;
    return acc;
  }
};

inline int effective_threads(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  int t = requested > 0 ? requested : hw;
  if (const char* env = std::getenv("HOMOCYCLE_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) t = std::min(t, cap);
  }
  return std::max(1, t);
}

namespace detail {

struct DpLayout {
  int symbols = 0, b = 0, L = 0, nmax = 0;
  long long CB = 1, UB = 1, S = 0;
  std::vector<long long> Rpow, Upow;
  std::vector<long long> dcls, duse;  // per-symbol flat-index deltas
  std::vector<std::vector<int>> succ;

  DpLayout(const SymbolTable& st, const HomologyLabeling& hl,
           const LengthClasses& lc, int n) {
    symbols = st.symbols;
    b = hl.b;
    L = lc.count();
    nmax = n;
    const long long R = 2LL * n + 1;
    Rpow.resize(b);
    for (int c = 0; c < b; ++c) {
      Rpow[c] = CB;
      CB *= R;
    }
    Upow.resize(std::max(0, L - 1));
    for (int k = 0; k + 1 < L; ++k) {
      Upow[k] = UB;
      UB *= (n + 1);
    }
    S = static_cast<long long>(symbols) * CB * UB;
    dcls.resize(symbols);
    duse.resize(symbols);
    for (int s = 0; s < symbols; ++s) {
      long long d = 0;
      for (int c = 0; c < b; ++c) d += hl.f[s][c] * Rpow[c];
      dcls[s] = d;
      int k = lc.of_symbol[s];
      duse[s] = (k + 1 < L) ? Upow[k] : 0;
    }
    succ.resize(symbols);
    for (int i = 0; i < symbols; ++i) {
      for (int j = 0; j < symbols; ++j) {
        if (st.term[i] == st.init[j]) succ[i].push_back(j);
      }
    }
  }

  BucketKey decode_key(long long cls, long long use, int n) const {
    BucketKey key(b + L, 0);
    for (int c = 0; c < b; ++c) {
      key[c] = static_cast<int>(cls % (2 * nmax + 1)) - nmax;
      cls /= (2 * nmax + 1);
    }
    int total = 0;
    for (int k = 0; k + 1 < L; ++k) {
      int cnt = static_cast<int>(use % (nmax + 1));
      use /= (nmax + 1);
      key[b + k] = cnt;
      total += cnt;
    }
    key[b + L - 1] = n - total;
    return key;
  }
};

// Count all admissible cyclic words of each length 1..nmax that start at
// start_sym, bucketed by class and usage.  One pass fills every period:
// after extending to length n, states whose current symbol may close back
// to start_sym are harvested into the period-n buckets.
template <typename Count>
void census_shard(const SymbolTable& st, const DpLayout& lay, int start_sym,
                  std::vector<BucketMap>& out) {
  std::vector<Count> cur(static_cast<std::size_t>(lay.S), Count(0));
  std::vector<Count> nxt;
  const long long blk = lay.CB * lay.UB;

  long long cls0 = 0;
  for (int c = 0; c < lay.b; ++c) cls0 += lay.nmax * lay.Rpow[c];
  cls0 += lay.dcls[start_sym];
  long long use0 = lay.duse[start_sym];
  cur[start_sym * blk + cls0 * lay.UB + use0] = Count(1);

  auto harvest = [&](int n) {
    for (int sym = 0; sym < lay.symbols; ++sym) {
      if (st.term[sym] != st.init[start_sym]) continue;
      const Count* base = cur.data() + sym * blk;
      for (long long cls = 0; cls < lay.CB; ++cls) {
        const Count* row = base + cls * lay.UB;
        for (long long use = 0; use < lay.UB; ++use) {
          if (row[use] != Count(0)) {
            out[n][lay.decode_key(cls, use, n)] += bigint(row[use]);
          }
        }
      }
    }
  };

  harvest(1);
  for (int n = 2; n <= lay.nmax; ++n) {
    nxt.assign(static_cast<std::size_t>(lay.S), Count(0));
    for (int sym = 0; sym < lay.symbols; ++sym) {
      const Count* base = cur.data() + sym * blk;
      for (long long cls = 0; cls < lay.CB; ++cls) {
        const Count* row = base + cls * lay.UB;
        for (long long use = 0; use < lay.UB; ++use) {
          Count v = row[use];
          if (v == Count(0)) continue;
          for (int ns : lay.succ[sym]) {
            nxt[ns * blk + (cls + lay.dcls[ns]) * lay.UB + use +
                lay.duse[ns]] += v;
          }
        }
      }
    }
    cur.swap(nxt);
    harvest(n);
  }
}

}  // namespace detail

inline CensusTable fixed_point_table(const SymbolTable& st,
                                     const HomologyLabeling& hl,
                                     const CensusOptions& opt) {
  if (opt.nmax < 1) throw BudgetError("census requires n_max >= 1");
  LengthClasses lc = LengthClasses::build(st);
  detail::DpLayout lay(st, hl, lc, opt.nmax);

  // (2m)^n bounds every count, so plain 64-bit words suffice for shallow
  // tables; otherwise fall back to big integers.
  bool fast = opt.nmax * std::log2(static_cast<double>(st.symbols)) <= 62.0;
  int threads = effective_threads(opt.threads);
  threads = std::min(threads, st.symbols);
  double frame_bytes = 2.0 * static_cast<double>(lay.S) * (fast ? 8.0 : 32.0);
  double need_mb = frame_bytes * threads / 1.0e6;
  if (need_mb > opt.budget_mb) {
    throw BudgetError("census needs about " + std::to_string(need_mb) +
                      " MB for period table depth " + std::to_string(opt.nmax) +
                      ", budget is " + std::to_string(opt.budget_mb) + " MB");
  }

  std::vector<std::vector<BucketMap>> shard(
      st.symbols, std::vector<BucketMap>(opt.nmax + 1));
  auto run = [&](int s0) {
    if (fast) {
      detail::census_shard<unsigned long long>(st, lay, s0, shard[s0]);
    } else {
      detail::census_shard<bigint>(st, lay, s0, shard[s0]);
    }
  };
  if (threads <= 1) {
    for (int s0 = 0; s0 < st.symbols; ++s0) run(s0);
  } else {
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::mutex mtx;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        while (true) {
          std::size_t mine;
          {
            std::lock_guard<std::mutex> lk(mtx);
            if (next >= static_cast<std::size_t>(st.symbols)) return;
            mine = next++;
          }
          run(static_cast<int>(mine));
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  CensusTable table;
  table.b = hl.b;
  table.nmax = opt.nmax;
  table.classes = lc;
  table.fix.assign(opt.nmax + 1, BucketMap{});
  // fixed merge order keeps the result independent of shard scheduling
  for (int s0 = 0; s0 < st.symbols; ++s0) {
    for (int n = 1; n <= opt.nmax; ++n) {
      for (const auto& [k, v] : shard[s0][n]) table.fix[n][k] += v;
    }
  }
  return table;
}

// Sieve the fixed-point layer down to primitive orbits: a point of least
// period d counted at period n = qd has its class and usage scaled by q, so
// subtract those images, then divide by n to group orbits.
inline void primitive_orbit_counts(CensusTable& t) {
  t.prim.assign(t.nmax + 1, BucketMap{});
  t.orbits.assign(t.nmax + 1, BucketMap{});
  for (int n = 1; n <= t.nmax; ++n) {
    for (const auto& [key, cnt] : t.fix[n]) {
      bigint p = cnt;
      for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        int q = n / d;
        bool divisible = true;
        for (int v : key) {
          if (v % q != 0) {
            divisible = false;
            break;
          }
        }
        if (!divisible) continue;
        BucketKey sub(key.size());
        for (std::size_t i = 0; i < key.size(); ++i) sub[i] = key[i] / q;
        auto it = t.prim[d].find(sub);
        if (it != t.prim[d].end()) p -= it->second;
      }
      if (p < 0) throw InternalError("negative primitive count");
      if (p == 0) continue;
      if (p % n != 0) throw InternalError("primitive count not divisible by period");
      t.prim[n][key] = p;
      t.orbits[n][key] = p / n;
    }
  }
}

// Largest period that a cycle of total length <= T can have.
inline int required_depth(const LengthClasses& lc, const ExactLength& T) {
  ExactLength ml = lc.min_value();
  int n = 0;
  while (compare((n + 1) * ml, T) <= 0) {
    ++n;
    if (n > 1000000) throw BudgetError("length bound implies unreasonable depth");
  }
  return n;
}

// Number of primitive orbits with class alpha and realized length <= T.
// The length comparison is exact; a double prefilter skips buckets far from
// the boundary.
inline bigint pi_empirical(const CensusTable& t, const ExactLength& T,
                           const std::vector<int>& alpha) {
  if (static_cast<int>(alpha.size()) != t.b)
    throw InternalError("class vector has wrong rank");
  int need = required_depth(t.classes, T);
  if (t.nmax < need) {
    throw BudgetError("period table depth " + std::to_string(t.nmax) +
                      " too small: length bound requires n_max >= " +
                      std::to_string(need));
  }
  const int L = t.classes.count();
  const double Td = T.to_double();
  bigint acc = 0;
  for (int n = 1; n <= t.nmax; ++n) {
    for (const auto& [key, cnt] : t.orbits[n]) {
      bool match = true;
      for (int c = 0; c < t.b; ++c) {
        if (key[c] != alpha[c]) {
          match = false;
          break;
        }
      }
      if (!match) continue;
      double len_d = 0;
      for (int k = 0; k < L; ++k) len_d += key[t.b + k] * t.classes.values_d[k];
      double margin = 1e-9 * (1.0 + std::abs(len_d) + std::abs(Td));
      if (len_d > Td + margin) continue;
      if (len_d < Td - margin) {
        acc += cnt;
        continue;
      }
      ExactLength len;
      for (int k = 0; k < L; ++k) len += key[t.b + k] * t.classes.values[k];
      if (compare(len, T) <= 0) acc += cnt;
    }
  }
  return acc;
}

// trace(A^n) in exact integers; the cross-check for the DP totals.
inline bigint trace_power(const Eigen::MatrixXi& A, int n) {
  const int N = static_cast<int>(A.rows());
  std::vector<std::vector<bigint>> P(N, std::vector<bigint>(N, 0)),
      B(N, std::vector<bigint>(N, 0));
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      P[i][j] = (i == j) ? 1 : 0;
      B[i][j] = A(i, j);
    }
  }
  auto mul = [N](const std::vector<std::vector<bigint>>& X,
                 const std::vector<std::vector<bigint>>& Y) {
    std::vector<std::vector<bigint>> Z(N, std::vector<bigint>(N, 0));
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < N; ++k) {
        if (X[i][k] == 0) continue;
        for (int j = 0; j < N; ++j) Z[i][j] += X[i][k] * Y[k][j];
      }
    return Z;
  };
  int e = n;
  while (e > 0) {
    if (e & 1) P = mul(P, B);
    B = mul(B, B);
    e >>= 1;
  }
  bigint tr = 0;
  for (int i = 0; i < N; ++i) tr += P[i][i];
  return tr;
}

// ---------------------------------------------------------------------------
// Oracles.

struct PrimCycle {
  std::vector<int> word;  // canonical rotation (lexicographically least)
  std::vector<int> alpha;
  std::vector<int> usage;
  ExactLength length;
};

// Exhaustive primitive-cycle enumeration for small combinatorial periods:
// depth-first over admissible words forced to start at their least symbol,
// keeping exactly the aperiodic minimal rotations.
inline std::vector<PrimCycle> dfs_oracle(const SymbolTable& st,
                                         const HomologyLabeling& hl,
                                         const LengthClasses& lc,
                                         int max_period) {
  std::vector<PrimCycle> out;
  std::vector<int> word;

  auto canonical_primitive = [&](const std::vector<int>& w) {
    const int p = static_cast<int>(w.size());
    for (int r = 1; r < p; ++r) {
      // compare rotation r against rotation 0
      int cmp = 0;
      for (int i = 0; i < p; ++i) {
        int a = w[(r + i) % p], b = w[i];
        if (a != b) {
          cmp = a < b ? -1 : 1;
          break;
        }
      }
      if (cmp < 0) return false;       // not minimal
      if (cmp == 0) return false;      // nontrivial period
    }
    return true;
  };

  auto emit = [&](const std::vector<int>& w) {
    PrimCycle pc;
    pc.word = w;
    pc.alpha = hl.class_of_walk(w);
    pc.usage.assign(lc.count(), 0);
    for (int s : w) {
      pc.usage[lc.of_symbol[s]] += 1;
      pc.length += lc.values[lc.of_symbol[s]];
    }
    // recompute length from usage classes for exactness (same thing); keep
    out.push_back(std::move(pc));
  };

  for (int p = 1; p <= max_period; ++p) {
    for (int s0 = 0; s0 < st.symbols; ++s0) {
      word.assign(1, s0);
      auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(word.size()) == p) {
          if (st.term[word.back()] == st.init[s0] &&
              canonical_primitive(word)) {
            emit(word);
          }
          return;
        }
        for (int ns = s0; ns < st.symbols; ++ns) {
          if (st.term[word.back()] != st.init[ns]) continue;
          word.push_back(ns);
          self(self);
          word.pop_back();
        }
      };
      rec(rec);
    }
  }
  return out;
}

// Rose fixed points by multinomial closed form: choose slot positions for
// each loop direction; per-loop forward/backward counts (a_i, b_i) with
// sum a_i + b_i = n contribute n! / prod(a_i! b_i!) to class (a_i - b_i).
inline BucketMap rose_fix_oracle(const SymbolTable& st,
                                 const HomologyLabeling& hl,
                                 const LengthClasses& lc, int n) {
  const int k = st.m;
  if (st.n != 1) throw InternalError("rose oracle needs a single vertex");
  std::vector<bigint> fact(n + 1);
  fact[0] = 1;
  for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;

  // loop i's class coordinate under the labeling (rose: all edges non-tree)
  std::vector<int> coord(k);
  for (int e = 0; e < k; ++e) {
    coord[e] = hl.coord_of_edge[e];
    if (coord[e] < 0) throw InternalError("rose loop missing a coordinate");
  }

  BucketMap out;
  std::vector<int> t(k, 0), a(k, 0);
  auto recA = [&](auto&& self, int i) -> void {
    if (i == k) {
      bigint cnt = fact[n];
      for (int e = 0; e < k; ++e)
        cnt /= fact[a[e]] * fact[t[e] - a[e]];
      BucketKey key(hl.b + lc.count(), 0);
      for (int e = 0; e < k; ++e) {
        key[coord[e]] = 2 * a[e] - t[e];
        key[hl.b + lc.of_symbol[2 * e]] += t[e];
      }
      out[key] += cnt;
      return;
    }
    for (a[i] = 0; a[i] <= t[i]; ++a[i]) self(self, i + 1);
  };
  auto recT = [&](auto&& self, int i, int rem) -> void {
    if (i == k - 1) {
      t[i] = rem;
      recA(recA, 0);
      return;
    }
    for (t[i] = 0; t[i] <= rem; ++t[i]) self(self, i + 1, rem - t[i]);
  };
  recT(recT, 0, n);
  return out;
}

// ---------------------------------------------------------------------------
// Census vs prediction.

struct PredictionRow {
  double T = 0;
  std::vector<int> alpha;
  bigint pi = 0;
  double pred0 = 0, pred1 = 0;
  double res0 = 0, res1 = 0;
};

struct PredictionTable {
  std::vector<PredictionRow> rows;
  bool lattice_warning = false;
};

inline std::vector<std::vector<int>> class_window(int b, int radius) {
  std::vector<std::vector<int>> out;
  if (radius < 0) return out;
  std::vector<int> cur(b, -radius);
  while (true) {
    out.push_back(cur);
    int c = b - 1;
    for (; c >= 0; --c) {
      if (++cur[c] <= radius) break;
      cur[c] = -radius;
    }
    if (c < 0) break;
  }
  return out;
}

inline PredictionTable compare_prediction(const CensusTable& t,
                                          const ExpansionReport& rep,
                                          const std::vector<double>& t_grid,
                                          int radius, bool lattice_warning) {
  if (rep.mode != Mode::Normalized)
    throw InternalError("prediction comparison requires the normalized mode");
  PredictionTable out;
  out.lattice_warning = lattice_warning;
  for (double T : t_grid) {
    double base = std::exp(rep.h * T) / std::pow(T, rep.b / 2.0 + 1.0);
    for (const auto& alpha : class_window(t.b, radius)) {
      PredictionRow row;
      row.T = T;
      row.alpha = alpha;
      row.pi = pi_empirical(t, ExactLength::from_double(T), alpha);
      row.pred0 = rep.c0 * base;
      row.pred1 = (rep.c0 + c1_of_alpha(rep, alpha) / T) * base;
      double pid = static_cast<double>(row.pi);
      row.res0 = std::abs(pid - row.pred0) / std::abs(row.pred0);
      row.res1 = std::abs(pid - row.pred1) / std::abs(row.pred1);
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace homocycle
