#include "forestlab/laws.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "forestlab/error.hpp"
#include "forestlab/polya.hpp"

namespace forestlab {

PeriodInfo detect_period(const TruncatedSeries& a) {
  PeriodInfo info;
  std::size_t g = 0;
  for (std::size_t n = 1; n <= a.order(); ++n) {
    if (sgn(a[n]) <= 0) continue;
    g = std::gcd(g, n);
    if (info.support_sample.size() < 8) info.support_sample.push_back(n);
  }
  if (g == 0) throw DomainError("detect_period: series has no positive coefficient at degree >= 1");
  info.period = g;
  // Scan down from the last multiple of g within the truncation.
  std::size_t onset = (a.order() / g) * g;
  while (onset >= g && sgn(a[onset]) > 0) onset -= g;
  onset += g;
  if (onset <= a.order()) info.onset = onset;
  return info;
}

DegreeWindow DegreeWindow::parse(std::string_view text) {
  const auto dots = text.find("..");
  auto number = [](std::string_view s) -> std::size_t {
    if (s.empty() || s.size() > 12 || s.find_first_not_of("0123456789") != std::string_view::npos) {
      throw DomainError("window: expected a nonnegative integer, got '" + std::string(s) + "'");
    }
    return std::stoul(std::string(s));
  };
  if (dots == std::string_view::npos) throw DomainError("window: expected a..b, got '" + std::string(text) + "'");
  DegreeWindow w{number(text.substr(0, dots)), number(text.substr(dots + 2))};
  if (w.begin > w.end) throw DomainError("window: begin exceeds end");
  return w;
}

const char* to_string(RatioVerdict v) {
  switch (v) {
    case RatioVerdict::ConvergesToOne: return "CONVERGES_TO_ONE";
    case RatioVerdict::Diverges: return "DIVERGES";
    case RatioVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

const char* to_string(Coherence c) { return c == Coherence::Agree ? "AGREE" : "CONFLICT"; }

RatioReport ratio_test(const TruncatedSeries& a, DegreeWindow window, RatioTestOptions options) {
  if (window.end > a.order()) {
    throw DomainError("ratio_test: window end " + std::to_string(window.end) + " exceeds truncation order " +
                      std::to_string(a.order()));
  }
  RatioReport report;
  report.period = detect_period(a).period;
  report.window = window;
  const std::size_t d = report.period;
  std::vector<double> gaps;
  for (std::size_t deg = std::max<std::size_t>(((window.begin + d - 1) / d) * d, d); deg <= window.end; deg += d) {
    const auto& hi = a[deg];
    const auto& lo = a[deg - d];
    if (sgn(hi) <= 0 || sgn(lo) <= 0) continue;
    RatioSample s;
    s.degree = deg;
    s.ratio = lo / hi;
    s.value = s.ratio.get_d();
    gaps.push_back(Coefficient((hi - lo) / hi).get_d());
    report.ratios.push_back(std::move(s));
  }
  if (report.ratios.size() < 4) {
    throw DomainError("ratio_test: only " + std::to_string(report.ratios.size()) +
                      " positive coefficient pairs in the window");
  }

  auto& t = report.trend;
  const std::size_t count = report.ratios.size();
  t.last = report.ratios.back().value;
  t.first_gap = std::abs(gaps.front());
  t.last_gap = std::abs(gaps.back());
  t.gap_shrinking = t.last_gap < t.first_gap;
  t.gap_strictly_decreasing = true;
  for (std::size_t k = 1; k < count; ++k) {
    if (!(std::abs(gaps[k]) < std::abs(gaps[k - 1]))) t.gap_strictly_decreasing = false;
  }
  // Least squares of log|gap| against log(degree) over the final half.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t used = 0;
  t.final_half_max = 0.0;
  for (std::size_t k = count / 2; k < count; ++k) {
    t.final_half_max = std::max(t.final_half_max, report.ratios[k].value);
    if (gaps[k] == 0.0) continue;
    const double x = std::log(static_cast<double>(report.ratios[k].degree));
    const double y = std::log(std::abs(gaps[k]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used >= 2 && sxx * static_cast<double>(used) - sx * sx > 0) {
    const double slope = (static_cast<double>(used) * sxy - sx * sy) / (static_cast<double>(used) * sxx - sx * sx);
    t.decay_exponent = -slope;
  }
  t.extrapolated_gap = t.last_gap * std::pow(10.0, -std::max(0.0, t.decay_exponent));

  const bool long_enough = report.ratios.back().degree >= options.min_window_end;
  if (long_enough && t.last_gap <= options.tolerance && t.gap_shrinking) {
    report.verdict = RatioVerdict::ConvergesToOne;
  } else if (t.final_half_max < 1.0 - options.tolerance && t.decay_exponent < options.stable_exponent) {
    report.verdict = RatioVerdict::Diverges;
  } else {
    report.verdict = RatioVerdict::Inconclusive;
  }
  return report;
}

std::vector<DensitySample> density(const TruncatedSeries& b, const TruncatedSeries& a, std::size_t d) {
  if (d == 0) throw DomainError("density: period must be positive");
  const std::size_t order = std::min(a.order(), b.order());
  std::vector<DensitySample> out;
  for (std::size_t deg = d; deg <= order; deg += d) {
    if (sgn(a[deg]) == 0) continue;
    DensitySample s{deg, b[deg] / a[deg], 0.0};
    s.value = s.ratio.get_d();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<DensitySample> schur_ratio(const TruncatedSeries& a, const TruncatedSeries& c, DegreeWindow window) {
  if (window.end > std::min(a.order(), c.order())) throw DomainError("schur_ratio: window exceeds truncation");
  std::vector<DensitySample> out;
  for (std::size_t n = window.begin; n <= window.end; ++n) {
    if (sgn(c[n]) <= 0) throw DomainError("schur_ratio: reference series is not positive at " + std::to_string(n));
    DensitySample s{n, a[n] / c[n], 0.0};
    s.value = s.ratio.get_d();
    out.push_back(std::move(s));
  }
  return out;
}

CoherenceReport check_main_theorem(const ComptonSystem& system, const ClassExpr& tree_class, std::size_t order,
                                   std::optional<DegreeWindow> window, const EvalLimits& limits,
                                   RatioTestOptions options) {
  CoherenceReport report;
  report.tree_class = to_string(tree_class);
  report.order = order;
  if (!system.is_tree_valued(tree_class)) {
    report.note = "class expression denotes forests, not trees";
    return report;
  }
  const auto digraph = build_digraph(system);
  const auto classification = classify_radius(system, digraph);
  report.structural = classification.verdict_for(system, tree_class);

  const SystemSeries series = evaluate_system(system, order, limits);
  const TruncatedSeries trees = evaluate_class_expr(system, series, tree_class);
  if (trees.is_zero()) {
    report.note = "tree class is empty";
    return report;
  }
  const TruncatedSeries forests = polya_exp_geq(trees, 1);
  report.period = detect_period(forests);
  const DegreeWindow w = window.value_or(DegreeWindow{order / 2, order});
  try {
    report.ratio = ratio_test(forests, w, options);
  } catch (const DomainError& e) {
    report.note = e.what();
    return report;
  }
  const bool radius_at_least_one = report.structural != Radius::SubOne;
  const RatioVerdict v = report.ratio->verdict;
  const bool agree = radius_at_least_one ? v == RatioVerdict::ConvergesToOne : v == RatioVerdict::Diverges;
  report.coherence = agree ? Coherence::Agree : Coherence::Conflict;
  if (!agree && v == RatioVerdict::Inconclusive) report.note = "ratio trend inconclusive on this window";
  return report;
}

}  // namespace forestlab
