#include "mograph/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "mograph/errors.hpp"

namespace mograph {

bool MotionSegment::operator==(const MotionSegment& other) const {
    return clip == other.clip && source_id == other.source_id &&
           start_frame == other.start_frame && end_frame == other.end_frame &&
           strength == other.strength && semantic_tag == other.semantic_tag &&
           segment_id == other.segment_id;
}

std::vector<int> find_dividing_points(const StrengthCurve& curve, int min_segment_len,
                                      double prominence) {
    if (curve.normalization != Normalization::unit_max) {
        throw ValueError("find_dividing_points needs a unit-max normalized curve");
    }
    if (min_segment_len < 1) throw ValueError("min_segment_len must be >= 1");
    const auto& v = curve.values;
    const int n = static_cast<int>(v.size());
    if (n < 2 * min_segment_len) return {};

    struct Candidate {
        int index;
        double value;
    };
    std::vector<Candidate> candidates;
    for (int t = 1; t + 1 < n; ++t) {
        // Strict drop from the left keeps only the leftmost frame of a plateau.
        if (!(v[t] < v[t - 1] && v[t] <= v[t + 1])) continue;

        // Nearest peak on each side: walk uphill until the slope turns.
        int l = t;
        while (l > 0 && v[l - 1] >= v[l]) --l;
        int r = t;
        while (r + 1 < n && v[r + 1] >= v[r]) ++r;
        const double dip = std::min(v[l], v[r]) - v[t];
        if (dip >= prominence) candidates.push_back({t, v[t]});
    }

    // Thin conflicts: lower minima claim their neighborhood first.
    std::vector<Candidate> order = candidates;
    std::sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) {
        return a.value != b.value ? a.value < b.value : a.index < b.index;
    });
    std::vector<int> accepted;
    for (const Candidate& c : order) {
        bool ok = true;
        for (int a : accepted) {
            if (std::abs(a - c.index) < min_segment_len) {
                ok = false;
                break;
            }
        }
        if (ok) accepted.push_back(c.index);
    }
    std::sort(accepted.begin(), accepted.end());
    return accepted;
}

std::vector<MotionSegment> segment_clip(const MotionClip& clip,
                                        const std::vector<int>& dividing_points,
                                        const StrengthCurve& strength) {
    const int n = clip.frame_count();
    if (strength.values.size() != static_cast<size_t>(n)) {
        throw ValueError("strength curve length must equal clip frame count");
    }
    for (size_t i = 0; i < dividing_points.size(); ++i) {
        const int d = dividing_points[i];
        if (d <= 0 || d >= n) throw ValueError("dividing point " + std::to_string(d) + " is not interior");
        if (i > 0 && dividing_points[i - 1] >= d) throw ValueError("dividing points must be strictly increasing");
    }

    std::vector<int> bounds;
    bounds.push_back(0);
    bounds.insert(bounds.end(), dividing_points.begin(), dividing_points.end());
    bounds.push_back(n);

    std::vector<MotionSegment> segments;
    for (size_t i = 0; i + 1 < bounds.size(); ++i) {
        const int lo = bounds[i];
        const int hi = bounds[i + 1];
        MotionSegment seg;
        seg.clip.skeleton = clip.skeleton;
        seg.clip.fps = clip.fps;
        seg.clip.source_id = clip.source_id;
        seg.clip.frames.assign(clip.frames.begin() + lo, clip.frames.begin() + hi);
        seg.source_id = clip.source_id;
        seg.start_frame = lo;
        seg.end_frame = hi;
        seg.strength.values.assign(strength.values.begin() + lo, strength.values.begin() + hi);
        seg.strength.fps = strength.fps;
        const double peak = seg.strength.values.empty()
                                ? 0.0
                                : *std::max_element(seg.strength.values.begin(), seg.strength.values.end());
        if (peak > 0.0) {
            for (double& x : seg.strength.values) x /= peak;
        }
        seg.strength.normalization = Normalization::unit_max;
        seg.segment_id = clip.source_id + "#" + std::to_string(lo);
        segments.push_back(std::move(seg));
    }
    return segments;
}

std::vector<MotionSegment> segment_clip(const MotionClip& clip,
                                        const std::vector<int>& dividing_points) {
    return segment_clip(clip, dividing_points, compute_motion_strength(clip));
}

MotionSegment ingest_semantic_clip(const MotionClip& clip, const std::string& tag,
                                   const SemanticLexicon& lexicon) {
    if (!lexicon.has_tag(tag)) throw UnknownTagError("tag '" + tag + "' not in semantic lexicon");
    clip.validate();
    MotionSegment seg;
    seg.clip = clip;
    seg.source_id = clip.source_id;
    seg.start_frame = 0;
    seg.end_frame = clip.frame_count();
    seg.strength = compute_motion_strength(clip);
    seg.semantic_tag = tag;
    seg.segment_id = clip.source_id + "#0";
    return seg;
}

}  // namespace mograph
