#pragma once

#include "failclust/coverage.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace failclust {

// Risk evaluation formulas. Declaration order is the canonical listing order.
enum class RefId {
  Naish1, Naish2, Jaccard, Anderberg, SorensenDice, Dice, Goodman, Tarantula, Qe, CbiInc,
  Wong2, Hamann, SimpleMatching, Sokal, RogersTanimoto, HammingEtc, Euclid, Wong1, RusselRao,
  Binary, Scott, Rogot1, Kulczynski2, Ochiai, M2, Ample2, Wong3, ArithmeticMean, Cohen, Fleiss,
  Crosstab, DStar, GP02, GP03, GP19
};

inline constexpr int kNumRefs = 35;
inline constexpr int kNumGroups = 12;

std::span<const RefId> all_refs();
std::string_view ref_name(RefId ref);

/// Case-insensitive; hyphens, spaces, underscores, '&' and '.' are ignored
/// ("sorensen-dice", "Rogers & Tanimoto", "CBI Inc." all resolve).
RefId parse_ref(std::string_view name);

/// REFs that yield identical ranking lists when representing a single failed test.
struct RefGroup {
  int id = 0;  // 1..12
  std::vector<RefId> members;
  RefId representative;
};

const RefGroup& group_of(RefId ref);
const RefGroup& ref_group(int id);
std::span<const RefGroup> all_groups();

/// Resolves "Group12"/"group12" to that group's representative, otherwise parses a REF name.
RefId parse_ref_or_group(std::string_view name);

namespace detail {

/// 0/0 -> 0, +x/0 -> +inf, -x/0 -> -inf.
template <typename Scalar>
Scalar ratio(Scalar num, Scalar den) {
  if (den != Scalar(0)) return num / den;
  if (num == Scalar(0)) return Scalar(0);
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  return num > Scalar(0) ? inf : -inf;
}

template <typename Scalar>
Scalar crosstab(const StatementCounts& c) {
  using std::abs;
  const Scalar cf = c.cf, uf = c.uf, cs = c.cs, us = c.us;
  const Scalar nf = c.nf(), ns = c.ns(), nc = c.nc(), nu = c.nu(), n = c.n();
  const Scalar phi = ratio(cf, nf) - ratio(cs, ns);
  if (phi == Scalar(0)) return Scalar(0);
  const Scalar e_cf = ratio(nc * nf, n);
  const Scalar e_cs = ratio(nc * ns, n);
  const Scalar e_uf = ratio(nu * nf, n);
  const Scalar e_us = ratio(nu * ns, n);
  const auto term = [](Scalar observed, Scalar expected) {
    const Scalar diff = observed - expected;
    return ratio(diff * diff, expected);
  };
  const Scalar chi2 = term(cf, e_cf) + term(cs, e_cs) + term(uf, e_uf) + term(us, e_us);
  return phi > Scalar(0) ? chi2 : -chi2;
}

}  // namespace detail

/// Suspiciousness of one statement under `ref`. Never NaN for counts with n >= 1.
template <typename Scalar = double>
Scalar score(RefId ref, const StatementCounts& c) {
  using detail::ratio;
  using std::abs;
  using std::sqrt;
  const Scalar cf = c.cf, uf = c.uf, cs = c.cs, us = c.us;
  const Scalar nf = c.nf(), ns = c.ns(), nc = c.nc(), nu = c.nu(), n = c.n();
  switch (ref) {
    case RefId::Naish1:
      return c.cf < c.nf() ? Scalar(-1) : ns - cs;
    case RefId::Naish2:
      return cf - ratio(cs, ns + 1);
    case RefId::Jaccard:
      return ratio(cf, nf + cs);
    case RefId::Anderberg:
      return ratio(cf, cf + 2 * (uf + cs));
    case RefId::SorensenDice:
      return ratio(2 * cf, 2 * cf + uf + cs);
    case RefId::Dice:
      return ratio(2 * cf, nf + cs);
    case RefId::Goodman:
      return ratio(2 * cf - uf - cs, 2 * cf + uf + cs);
    case RefId::Tarantula: {
      const Scalar fail_ratio = ratio(cf, nf);
      return ratio(fail_ratio, fail_ratio + ratio(cs, ns));
    }
    case RefId::Qe:
      return ratio(cf, nc);
    case RefId::CbiInc:
      return ratio(cf, nc) - ratio(nf, n);
    case RefId::Wong2:
      return cf - cs;
    case RefId::Hamann:
      return ratio(cf + us - uf - cs, n);
    case RefId::SimpleMatching:
      return ratio(cf + us, n);
    case RefId::Sokal:
      return ratio(2 * (cf + us), 2 * (cf + us) + uf + cs);
    case RefId::RogersTanimoto:
      return ratio(cf + us, cf + us + 2 * (uf + cs));
    case RefId::HammingEtc:
      return cf + us;
    case RefId::Euclid:
      return sqrt(cf + us);
    case RefId::Wong1:
      return cf;
    case RefId::RusselRao:
      return ratio(cf, n);
    case RefId::Binary:
      return c.cf < c.nf() ? Scalar(0) : Scalar(1);
    case RefId::Scott:
      return ratio(4 * cf * us - 4 * uf * cs - (uf - cs) * (uf - cs),
                   (2 * cf + uf + cs) * (2 * us + uf + cs));
    case RefId::Rogot1:
      return Scalar(0.5) * (ratio(cf, 2 * cf + uf + cs) + ratio(us, 2 * us + uf + cs));
    case RefId::Kulczynski2:
      return Scalar(0.5) * (ratio(cf, nf) + ratio(cf, nc));
    case RefId::Ochiai:
      return ratio(cf, sqrt(nf * nc));
    case RefId::M2:
      return ratio(cf, cf + us + 2 * (uf + cs));
    case RefId::Ample2:
      return ratio(cf, nf) - ratio(cs, ns);
    case RefId::Wong3: {
      Scalar h;
      if (c.cs <= 2)
        h = cs;
      else if (c.cs <= 10)
        h = 2 + Scalar(0.1) * (cs - 2);
      else
        h = Scalar(2.8) + Scalar(0.001) * (cs - 10);
      return cf - h;
    }
    case RefId::ArithmeticMean:
      return ratio(2 * cf * us - 2 * uf * cs, nc * nu + nf * ns);
    case RefId::Cohen:
      return ratio(2 * cf * us - 2 * uf * cs, nc * ns + nf * nu);
    case RefId::Fleiss:
      // Denominator is a sum, as in the original table cell.
      return ratio(4 * cf * us - 4 * uf * cs - (uf - cs) * (uf - cs),
                   (2 * cf + uf + cs) + (2 * us + uf + cs));
    case RefId::Crosstab:
      return detail::crosstab<Scalar>(c);
    case RefId::DStar:
      return ratio(cf * cf, uf + cs);
    case RefId::GP02:
      return 2 * (cf + sqrt(us)) + sqrt(cs);
    case RefId::GP03:
      return sqrt(abs(cf * cf - sqrt(cs)));
    case RefId::GP19:
      return cf * sqrt(abs(cs - cf + uf - us));
  }
  return Scalar(0);
}

template <typename Scalar = double>
using SuspiciousnessVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// 1-based tie-collapsed ranks, one per statement.
using RankingList = Eigen::VectorXi;

template <typename Scalar = double>
SuspiciousnessVector<Scalar> suspiciousness(RefId ref, const Spectrum& spectrum) {
  SuspiciousnessVector<Scalar> out(spectrum.num_statements());
  for (int s = 0; s < spectrum.num_statements(); ++s) out(s) = score<Scalar>(ref, spectrum.at(s));
  return out;
}

inline constexpr double kTieTolerance = 1e-12;

/// Sorts statements by descending score; each maximal run of equal scores
/// (within kTieTolerance of the run's first score, infinities equal to each
/// other) takes the run's first 1-based position.
template <typename Derived>
RankingList rank(const Eigen::DenseBase<Derived>& scores) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = scores.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return scores(a) > scores(b); });

  const auto same = [](Scalar a, Scalar b) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    using std::abs;
    return abs(a - b) <= Scalar(kTieTolerance);
  };

  RankingList ranks(n);
  Eigen::Index run_start = 0;
  for (Eigen::Index pos = 0; pos < n; ++pos) {
    const Eigen::Index s = order[static_cast<std::size_t>(pos)];
    if (pos > 0 && !same(scores(order[static_cast<std::size_t>(run_start)]), scores(s)))
      run_start = pos;
    ranks(s) = static_cast<int>(run_start + 1);
  }
  return ranks;
}

}  // namespace failclust
