#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "asymlab/bigreal.hpp"
#include "asymlab/errors.hpp"
#include "asymlab/ladder.hpp"
#include "asymlab/semiext.hpp"

namespace asymlab {

struct CoverLevel {
  int k = 0;
  std::vector<Interval> intervals;  // Delta_{k,i}, i = 0 .. 2^k - 1
  BigReal total_length;
};

inline constexpr int kDefaultCoverCap = 10;

/// Delta_{k,0} = [a_k, b_k] and Delta_{k,i+1} = f(Delta_{k,i}). The image of
/// the interval containing 0 is [min(f(a), f(b)), f(0)]; the others are
/// mapped by their endpoints.
inline CoverLevel build_cover(const RenormLadder& L, int k, int cover_cap = kDefaultCoverCap) {
  if (k > cover_cap)
    throw DomainError("build_cover: level " + std::to_string(k) + " exceeds the cover cap " + std::to_string(cover_cap));
  const auto& m = L.map;
  const auto& lv = L.level(k);
  CoverLevel cv;
  cv.k = k;
  std::size_t n = two_pow(k);
  cv.intervals.reserve(n);
  cv.intervals.push_back({lv.a, lv.b});
  for (std::size_t i = 1; i < n; ++i) {
    const Interval& prev = cv.intervals.back();
    BigReal fl = m.eval(prev.lo), fr = m.eval(prev.hi);
    if (prev.lo.sign() < 0 && prev.hi.sign() > 0) {
      cv.intervals.push_back({min(fl, fr), m.eval(BigReal(m.precision()))});
    } else {
      cv.intervals.push_back({min(fl, fr), max(fl, fr)});
    }
  }
  cv.total_length = BigReal(m.precision());
  for (const auto& I : cv.intervals) cv.total_length += I.length();

  // pairwise disjoint interiors
  std::vector<const Interval*> sorted;
  for (const auto& I : cv.intervals) sorted.push_back(&I);
  std::sort(sorted.begin(), sorted.end(), [](const Interval* x, const Interval* y) { return x->lo < y->lo; });
  // neighbours may share an endpoint (a periodic point of the level below);
  // allow overlaps at the rounding scale of the ladder roots
  BigReal abs_slack = max(lv.root_tol, max(lv.fixed_residual, lv.preimage_residual)) * 64L;
  BigReal rel = ldexp(BigReal(1L, m.precision()), -static_cast<long>(m.precision() / 2));
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    BigReal slack = max(abs_slack, min(sorted[i]->length(), sorted[i - 1]->length()) * rel);
    if (sorted[i]->lo < sorted[i - 1]->hi - slack)
      throw CoverIntegrityError("build_cover: intervals of level " + std::to_string(k) +
                                " overlap near " + sorted[i]->lo.to_string(12) +
                                " (the parameter is not deep enough)");
  }
  return cv;
}

struct HausdorffRow {
  int k = 0;
  double gamma = 0;
  BigReal sum;
  std::optional<bool> two_step_decrease;  // sum(k + 2) < sum(k), even k only
};

struct HausdorffTable {
  std::vector<HausdorffRow> rows;
  std::vector<std::pair<double, std::optional<int>>> k0;  // per gamma
};

inline BigReal cover_sum(const CoverLevel& c, double gamma) {
  const mpfr_prec_t P = c.total_length.precision();
  BigReal g(gamma, P);
  BigReal s(P);
  for (const auto& I : c.intervals) s += pow_real(I.length(), g);
  return s;
}

/// Sums of |Delta_{k,i}|^gamma; k0 is the smallest even k from which the
/// two-step decrease holds for every even level within the covers given.
inline HausdorffTable hausdorff_sums(const std::vector<CoverLevel>& covers, const std::vector<double>& gammas) {
  HausdorffTable t;
  for (double g : gammas) {
    std::vector<HausdorffRow> rows;
    for (const auto& c : covers) rows.push_back({c.k, g, cover_sum(c, g), std::nullopt});
    for (auto& r : rows) {
      if (r.k % 2 != 0) continue;
      for (const auto& q : rows)
        if (q.k == r.k + 2) r.two_step_decrease = q.sum < r.sum;
    }
    std::optional<int> k0;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      if (!it->two_step_decrease) continue;
      if (*it->two_step_decrease) {
        k0 = it->k;
      } else {
        break;
      }
    }
    t.k0.emplace_back(g, k0);
    t.rows.insert(t.rows.end(), rows.begin(), rows.end());
  }
  return t;
}

struct CantorSample {
  BigReal x;
  std::size_t interval;  // index i of Delta_{depth,i} containing x
};

/// f^i(0), i = 1 .. 2^depth, sorted, each with the index of its cover interval.
inline std::vector<CantorSample> cantor_samples(const RenormLadder& L, int depth, const CoverLevel& cover) {
  if (cover.k != depth) throw DomainError("cantor_samples: cover level mismatch");
  const auto& m = L.map;
  std::size_t n = two_pow(depth);
  std::vector<CantorSample> out;
  BigReal x(m.precision()), tmp(m.precision());
  for (std::size_t i = 1; i <= n; ++i) {
    m.step(x.raw(), tmp.raw());
    std::size_t idx = i % n;
    if (!cover.intervals[idx].contains(x))
      throw CoverIntegrityError("cantor_samples: f^" + std::to_string(i) + "(0) outside Delta_{k," +
                                std::to_string(idx) + "}");
    out.push_back({x, idx});
  }
  std::sort(out.begin(), out.end(), [](const CantorSample& a, const CantorSample& b) { return a.x < b.x; });
  return out;
}

}  // namespace asymlab
