#pragma once

// Empirical zero-one law analysis on counting series: period detection, the
// consecutive-coefficient ratio test, densities, and the coherence check between
// the structural radius verdict and the ratio trend of the forest class.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forestlab/evaluate.hpp"
#include "forestlab/series.hpp"
#include "forestlab/structure.hpp"
#include "forestlab/system.hpp"

namespace forestlab {

struct PeriodInfo {
  std::size_t period = 1;
  std::vector<std::size_t> support_sample;  // first few positive degrees
  // Smallest multiple of the period from which every multiple is positive within the truncation.
  std::optional<std::size_t> onset;
};

// gcd of the positive-support degrees n >= 1. Throws DomainError for a series with no such degree.
PeriodInfo detect_period(const TruncatedSeries& a);

struct DegreeWindow {
  std::size_t begin = 0;
  std::size_t end = 0;

  // `a..b`
  static DegreeWindow parse(std::string_view text);
};

enum class RatioVerdict { ConvergesToOne, Diverges, Inconclusive };
const char* to_string(RatioVerdict v);

struct RatioSample {
  std::size_t degree = 0;  // n*d; the ratio is a((n-1)d) / a(nd)
  Coefficient ratio;
  double value = 0.0;
};

struct RatioTrend {
  double last = 0.0;
  double first_gap = 0.0;
  double last_gap = 0.0;
  bool gap_strictly_decreasing = false;
  bool gap_shrinking = false;
  // Fitted power-law decay of |1 - ratio| over the final half of the window.
  double decay_exponent = 0.0;
  // last_gap extrapolated to ten times the window end along the fitted power law.
  double extrapolated_gap = 0.0;
  double final_half_max = 0.0;
};

struct RatioTestOptions {
  double tolerance = 0.05;
  // CONVERGES_TO_ONE needs the window to reach at least this degree.
  std::size_t min_window_end = 2000;
  // A gap decaying slower than n^-stable_exponent counts as stabilized.
  double stable_exponent = 0.1;
};

struct RatioReport {
  std::size_t period = 1;
  DegreeWindow window;
  std::vector<RatioSample> ratios;
  RatioTrend trend;
  RatioVerdict verdict = RatioVerdict::Inconclusive;
};

// Ratios a((n-1)d)/a(nd) for nd in the window, where both coefficients are positive.
// CONVERGES_TO_ONE: window end >= min_window_end, final |1 - ratio| <= tolerance, gap shrinking.
// DIVERGES: every ratio in the final half stays below 1 - tolerance and the gap has stopped decaying.
// Throws DomainError when the window exceeds the truncation or yields fewer than four ratios.
RatioReport ratio_test(const TruncatedSeries& a, DegreeWindow window, RatioTestOptions options = {});

struct DensitySample {
  std::size_t degree = 0;
  Coefficient ratio;
  double value = 0.0;
};

// b(nd)/a(nd) at every multiple of d where a(nd) != 0.
std::vector<DensitySample> density(const TruncatedSeries& b, const TruncatedSeries& a, std::size_t d);

// a(n)/c(n) for n in the window; c must be positive there.
std::vector<DensitySample> schur_ratio(const TruncatedSeries& a, const TruncatedSeries& c, DegreeWindow window);

enum class Coherence { Agree, Conflict };
const char* to_string(Coherence c);

struct CoherenceReport {
  std::string tree_class;
  std::size_t order = 0;
  Radius structural = Radius::Finite;
  std::optional<PeriodInfo> period;
  std::optional<RatioReport> ratio;
  Coherence coherence = Coherence::Conflict;
  std::string note;
};

// Compares the structural verdict of the tree class with the ratio test on its
// forest class E_{>=1}(T). Default window: [order/2, order].
CoherenceReport check_main_theorem(const ComptonSystem& system, const ClassExpr& tree_class, std::size_t order,
                                   std::optional<DegreeWindow> window = std::nullopt, const EvalLimits& limits = {},
                                   RatioTestOptions options = {});

}  // namespace forestlab
