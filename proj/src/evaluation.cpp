// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "evlive/evaluation.hpp"

#include <algorithm>

#include "evlive/error.hpp"

namespace evlive {

double temporal_iou(const TemporalSegment& a, const TemporalSegment& b) {
  const Micros inter = std::max<Micros>(0, std::min(a.offset, b.offset) - std::max(a.onset, b.onset));
  const Micros union_len = a.duration() + b.duration() - inter;
  if (union_len <= 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(union_len);
}

Matching match_segments(std::span<const TemporalSegment> pred,
                        std::span<const TemporalSegment> gt, double iou_threshold) {
  struct Candidate {
    std::size_t p, g;
    double iou;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = 0; j < gt.size(); ++j) {
      if (pred[i].label != gt[j].label) continue;
      const double iou = temporal_iou(pred[i], gt[j]);
      if (iou > 0 && iou >= iou_threshold) cands.push_back({i, j, iou});
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (pred[a.p].onset != pred[b.p].onset) return pred[a.p].onset < pred[b.p].onset;
    return gt[a.g].onset < gt[b.g].onset;
  });

  Matching m;
  std::vector<bool> pred_used(pred.size()), gt_used(gt.size());
  for (const Candidate& c : cands) {
    if (pred_used[c.p] || gt_used[c.g]) continue;
    pred_used[c.p] = gt_used[c.g] = true;
    m.pairs.push_back({c.p, c.g, c.iou});
    if (c.iou == iou_threshold) ++m.on_threshold;
  }
  for (std::size_t i = 0; i < pred.size(); ++i) {
    auto& cc = m.counts[pred[i].label];
    pred_used[i] ? ++cc.tp : ++cc.fp;
  }
  for (std::size_t j = 0; j < gt.size(); ++j) {
    if (!gt_used[j]) ++m.counts[gt[j].label].fn;
  }
  return m;
}

double f1_score(double precision, double recall) {
  return precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

SegmentationReport segmentation_metrics(const Matching& matching, double iou_threshold) {
  SegmentationReport r;
  r.iou_threshold = iou_threshold;
  r.counts = matching.counts;
  r.matched = matching.pairs;
  r.on_threshold = matching.on_threshold;
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
  };
  for (const auto& [label, c] : matching.counts) {
    ClassScores s;
    s.precision = ratio(c.tp, c.tp + c.fp);
    s.recall = ratio(c.tp, c.tp + c.fn);
    s.f1 = f1_score(s.precision, s.recall);
    r.per_class[label] = s;
  }
  if (r.per_class.empty()) {
    r.empty = true;
    return r;
  }
  for (const auto& [label, s] : r.per_class) {
    r.macro.precision += s.precision;
    r.macro.recall += s.recall;
    r.macro.f1 += s.f1;
  }
  const auto k = static_cast<double>(r.per_class.size());
  r.macro.precision /= k;
  r.macro.recall /= k;
  r.macro.f1 /= k;
  return r;
}

SegmentationReport evaluate_segments(std::span<const TemporalSegment> pred,
                                     std::span<const TemporalSegment> gt, double iou_threshold) {
  return segmentation_metrics(match_segments(pred, gt, iou_threshold), iou_threshold);
}

BiometricReport biometric_metrics(std::span<const LabeledDecision> decisions) {
  BiometricReport r;
  std::size_t attacks_accepted = 0;
  std::size_t genuine_rejected = 0;
  for (const LabeledDecision& d : decisions) {
    if (d.label == Verdict::replay) {
      ++r.n_attack;
      if (d.decision.verdict == Verdict::genuine) ++attacks_accepted;
    } else {
      ++r.n_bona_fide;
      if (d.decision.verdict == Verdict::replay) ++genuine_rejected;
    }
  }
  if (r.n_attack == 0 || r.n_bona_fide == 0) {
    throw Error(ErrorCode::OneClassOnly, "need at least one attack and one bona fide sample");
  }
  r.apcer = 100.0 * static_cast<double>(attacks_accepted) / static_cast<double>(r.n_attack);
  r.bpcer = 100.0 * static_cast<double>(genuine_rejected) / static_cast<double>(r.n_bona_fide);
  r.acer = (r.apcer + r.bpcer) / 2.0;
  const auto correct = decisions.size() - attacks_accepted - genuine_rejected;
  r.top1_accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(decisions.size());
  return r;
}

}  // namespace evlive
