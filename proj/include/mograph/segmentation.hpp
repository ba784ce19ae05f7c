#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mograph/motion_clip.hpp"
#include "mograph/phrases.hpp"

namespace mograph {

/// A motion-graph node: a contiguous slice of a source clip, its strength
/// curve, and an optional semantic tag. Semantic segments always span the
/// whole source clip.
struct MotionSegment {
    MotionClip clip;
    std::string source_id;
    int start_frame = 0;  // [start_frame, end_frame) in the source clip
    int end_frame = 0;
    StrengthCurve strength;
    std::optional<std::string> semantic_tag;
    std::string segment_id;

    int frame_count() const { return end_frame - start_frame; }

    bool operator==(const MotionSegment& other) const;
};

/// Frame indices of the local minima of a unit-max strength curve that
/// clear the prominence bar, thinned so surviving minima are at least
/// min_segment_len frames apart (the lower minimum wins a conflict,
/// earlier index on ties). Plateau minima report their leftmost frame.
std::vector<int> find_dividing_points(const StrengthCurve& curve, int min_segment_len,
                                      double prominence);

inline int default_min_segment_len(double fps) {
    return static_cast<int>(std::lround(0.5 * fps));
}
constexpr double kDefaultProminence = 0.05;

/// Cuts the clip at the dividing points. Segments tile [0, frame_count)
/// exactly; each carries its slice of `strength` re-normalized to unit max.
/// Segment ids are "{source_id}#{start_frame}".
std::vector<MotionSegment> segment_clip(const MotionClip& clip,
                                        const std::vector<int>& dividing_points,
                                        const StrengthCurve& strength);

/// Same, computing the strength curve with default weights and window.
std::vector<MotionSegment> segment_clip(const MotionClip& clip,
                                        const std::vector<int>& dividing_points);

/// Wraps a manually delimited semantic clip as a single whole-clip segment.
/// The tag must exist in the lexicon; the segment is never subdivided.
MotionSegment ingest_semantic_clip(const MotionClip& clip, const std::string& tag,
                                   const SemanticLexicon& lexicon);

}  // namespace mograph
