#include "sicvpr/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_set>

namespace sicvpr {

namespace {

std::vector<ScoredMatch> labelled_decisions(std::span<const ScoredMatch> decisions,
                                            const GroundTruth& gt) {
  std::vector<ScoredMatch> out;
  std::unordered_set<Index> seen;
  for (const auto& d : decisions) {
    if (!seen.insert(d.query).second) {
      throw EvalError("more than one decision for query " + std::to_string(d.query));
    }
    if (gt.at(d.query)) out.push_back(d);
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<PRPoint> pr_curve(std::span<const ScoredMatch> decisions, const GroundTruth& gt) {
  const Index labelled = gt.labelled_count();
  if (labelled == 0) throw EvalError("ground truth labels no queries");
  auto accepted = labelled_decisions(decisions, gt);
  if (accepted.empty()) throw EvalError("no decision overlaps a ground-truthed query");
  std::stable_sort(accepted.begin(), accepted.end(),
                   [](const auto& a, const auto& b) { return a.confidence > b.confidence; });

  std::vector<PRPoint> points;
  Index tp = 0;
  Index fp = 0;
  for (std::size_t i = 0; i < accepted.size();) {
    const double threshold = accepted[i].confidence;
    for (; i < accepted.size() && accepted[i].confidence == threshold; ++i) {
      if (gt.is_correct(accepted[i].query, accepted[i].match_index)) {
        ++tp;
      } else {
        ++fp;
      }
    }
    PRPoint p;
    p.threshold = threshold;
    p.tp = tp;
    p.fp = fp;
    p.fn = labelled - tp;
    p.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 1.0;
    p.recall = static_cast<double>(tp) / static_cast<double>(labelled);
    points.push_back(p);
  }
  return points;
}

double auc(std::span<const PRPoint> points) {
  if (points.empty()) return 0.0;
  std::vector<PRPoint> sorted(points.begin(), points.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.recall < b.recall; });
  double area = 0.0;
  double prev_recall = 0.0;
  double prev_precision = sorted.front().precision;
  for (const auto& p : sorted) {
    area += (p.recall - prev_recall) * (p.precision + prev_precision) / 2.0;
    prev_recall = p.recall;
    prev_precision = p.precision;
  }
  return area;
}

ExtendedPrecision extended_precision(std::span<const PRPoint> points) {
  ExtendedPrecision out;
  if (points.empty()) return out;
  const PRPoint* min_recall = &points.front();
  for (const auto& p : points) {
    if (p.recall < min_recall->recall ||
        (p.recall == min_recall->recall && p.precision > min_recall->precision)) {
      min_recall = &p;
    }
    if (p.precision == 1.0) out.r_p100 = std::max(out.r_p100, p.recall);
  }
  out.p_r0 = min_recall->precision;
  out.ep = (out.p_r0 + out.r_p100) / 2.0;
  return out;
}

double top1_accuracy(std::span<const ScoredMatch> decisions, const GroundTruth& gt) {
  const Index labelled = gt.labelled_count();
  if (labelled == 0) throw EvalError("ground truth labels no queries");
  Index correct = 0;
  for (const auto& d : labelled_decisions(decisions, gt)) correct += gt.is_correct(d.query, d.match_index);
  return static_cast<double>(correct) / static_cast<double>(labelled);
}

EvalReport evaluate(std::span<const ScoredMatch> decisions, const GroundTruth& gt) {
  EvalReport report;
  report.pr_points = pr_curve(decisions, gt);
  report.auc = auc(report.pr_points);
  const auto ep = extended_precision(report.pr_points);
  report.ep = ep.ep;
  report.p_r0 = ep.p_r0;
  report.r_p100 = ep.r_p100;
  report.top1_accuracy = top1_accuracy(decisions, gt);
  return report;
}

TimingStats summarize_timing(std::span<const double> per_frame_ms) {
  TimingStats s;
  if (per_frame_ms.empty()) return s;
  std::vector<double> sorted(per_frame_ms.begin(), per_frame_ms.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  s.frames = static_cast<Index>(n);
  s.mean_ms = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  s.median_ms = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
  s.p95_ms = sorted[std::min(n - 1, static_cast<std::size_t>(0.95 * static_cast<double>(n)))];
  s.max_ms = sorted.back();
  return s;
}

void write_pr_csv(std::span<const PRPoint> points, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "threshold,precision,recall\n";
  for (const auto& p : points) {
    out << format_double(p.threshold) << ',' << format_double(p.precision) << ','
        << format_double(p.recall) << '\n';
  }
}

void write_summary(const EvalReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "auc=" << format_double(report.auc) << '\n'
      << "ep=" << format_double(report.ep) << '\n'
      << "p_r0=" << format_double(report.p_r0) << '\n'
      << "r_p100=" << format_double(report.r_p100) << '\n'
      << "accuracy=" << format_double(report.top1_accuracy) << '\n';
  if (report.timing) {
    out << "frames=" << report.timing->frames << '\n'
        << "ms_per_frame_mean=" << format_double(report.timing->mean_ms) << '\n'
        << "ms_per_frame_median=" << format_double(report.timing->median_ms) << '\n'
        << "ms_per_frame_p95=" << format_double(report.timing->p95_ms) << '\n'
        << "ms_per_frame_max=" << format_double(report.timing->max_ms) << '\n';
  }
}

void write_summary_csv(const EvalReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "auc,ep,p_r0,r_p100,accuracy\n"
      << format_double(report.auc) << ',' << format_double(report.ep) << ','
      << format_double(report.p_r0) << ',' << format_double(report.r_p100) << ','
      << format_double(report.top1_accuracy) << '\n';
}

}  // namespace sicvpr
