// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <map>
#include <span>
#include <vector>

#include "evlive/liveness.hpp"
#include "evlive/ocular.hpp"

namespace evlive {

inline constexpr double kDefaultIouThreshold = 0.5;

double temporal_iou(const TemporalSegment& a, const TemporalSegment& b);

struct MatchedPair {
  std::size_t pred = 0;
  std::size_t gt = 0;
  double iou = 0;
};

struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

struct Matching {
  std::vector<MatchedPair> pairs;
  std::map<MovementLabel, ClassCounts> counts;
  /// Matches whose IoU sits exactly on the threshold.
  std::size_t on_threshold = 0;
};

/// One-to-one greedy matching in descending IoU among same-label pairs with
/// IoU >= threshold; ties go to the earlier prediction onset.
Matching match_segments(std::span<const TemporalSegment> pred,
                        std::span<const TemporalSegment> gt,
                        double iou_threshold = kDefaultIouThreshold);

struct ClassScores {
  double precision = 0;  // percent
  double recall = 0;
  double f1 = 0;
};

/// Harmonic mean of two percentages; 0 when both are 0.
double f1_score(double precision, double recall);

struct SegmentationReport {
  double iou_threshold = kDefaultIouThreshold;
  std::map<MovementLabel, ClassScores> per_class;
  std::map<MovementLabel, ClassCounts> counts;
  ClassScores macro;
  std::vector<MatchedPair> matched;
  std::size_t on_threshold = 0;
  /// No predictions and no ground truth at all.
  bool empty = false;
};

SegmentationReport segmentation_metrics(const Matching& matching,
                                        double iou_threshold = kDefaultIouThreshold);

SegmentationReport evaluate_segments(std::span<const TemporalSegment> pred,
                                     std::span<const TemporalSegment> gt,
                                     double iou_threshold = kDefaultIouThreshold);

struct LabeledDecision {
  Verdict label = Verdict::genuine;  // ground truth
  LivenessDecision decision;
};

struct BiometricReport {
  double top1_accuracy = 0;  // percent
  double apcer = 0;
  double bpcer = 0;
  double acer = 0;
  std::size_t n_attack = 0;
  std::size_t n_bona_fide = 0;
};

BiometricReport biometric_metrics(std::span<const LabeledDecision> decisions);

}  // namespace evlive
