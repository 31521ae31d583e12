// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

// JSON encodings of every file the tools read or write.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "evlive/evaluation.hpp"
#include "evlive/liveness.hpp"
#include "evlive/ocular.hpp"
#include "evlive/surfaces.hpp"
#include "evlive/synth.hpp"
#include "evlive/window_stats.hpp"

namespace evlive {

using Json = nlohmann::ordered_json;

/// Parses JSON text, mapping syntax and schema errors to ParseError.
Json parse_json(const std::string& text);

Json to_json(const RegionOfInterest& roi);
RegionOfInterest roi_from_json(const Json& j);

Json to_json(const TemporalSegment& s);
Json to_json(const std::vector<TemporalSegment>& segs);
std::vector<TemporalSegment> segments_from_json(const Json& j);

/// Accepts `*_us` fields or `*_ms` convenience fields (converted to us).
BlinkParams blink_params_from_json(const Json& j, BlinkParams base = {});
SaccadeParams saccade_params_from_json(const Json& j, SaccadeParams base = {});
Json to_json(const BlinkParams& p);
Json to_json(const SaccadeParams& p);

Json to_json(const WindowStats& w);
Json to_json(const ClipFeatures& f);
ClipFeatures clip_features_from_json(const Json& j);

Json to_json(const FeatureClassifier& clf);
FeatureClassifier classifier_from_json(const Json& j);

Json decision_json(const LivenessDecision& d, std::optional<ChallengeReason> reason = {});

Json to_json(const SegmentationReport& r);
Json to_json(const BiometricReport& r);
std::vector<LabeledDecision> labeled_decisions_from_json(const Json& j);

Json sae_metadata(const SAEFrame& frame);

Json to_json(const ClipSpec& spec);
ClipSpec clip_spec_from_json(const Json& j);
ReplaySpec replay_spec_from_json(const Json& j);

/// Batch manifest entry: {"path", "subject", "label", optional "roi"}.
struct ManifestEntry {
  std::string path;
  std::string subject;
  Verdict label = Verdict::genuine;
  std::optional<RegionOfInterest> roi;
};

std::vector<ManifestEntry> manifest_from_json(const Json& j);
Json to_json(const std::vector<ManifestEntry>& manifest);

}  // namespace evlive
