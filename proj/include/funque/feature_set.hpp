#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "funque/csf.hpp"
#include "funque/features_info.hpp"
#include "funque/features_ssim.hpp"
#include "funque/media_io.hpp"
#include "funque/transform.hpp"

namespace funque {

// Canonical feature naming: "<Y|Cb|Cr>-<BASE>@<level>", e.g. "Y-MS-ESSIM@2".
std::string feature_id(Channel ch, const std::string& base, int level);
std::string channel_prefix(Channel ch);

// Features defined on a frame difference (previous frame needed): these carry
// no value on a video's first frame and pool over T-1 frames.
bool feature_is_lagged(const std::string& id);

struct ExtractConfig {
    TransformConfig tf;
    bool use_chroma = false;  // false: Y only; true: Y+Cb+Cr
    InfoConfig info;
    SsimConstants ssim;
    // When nonempty, only these features are computed (shared work is still
    // shared); ids outside the candidate set are rejected.
    std::set<std::string> only;
};

// Every feature id the configuration can produce, in canonical (output) order:
// per channel: SSIM/ESSIM/MS-SSIM/MS-ESSIM@L, VIF-HV@L, VIF-A@1..L,
// SRRED/TRRED/STRRED-HV@L, SRRED/TRRED/STRRED-A@1..L, DLM-S@1..L,
// Blur/Edge/dTL-SAI/dTL-Blur/MAD-Ref/MAD-Dis/MAD@L.
std::vector<std::string> candidate_feature_ids(const ExtractConfig& cfg);

// Stateful per-video walk: feed frame pairs in display order; lagged features
// appear from the second frame on.
class VideoFeatureExtractor {
  public:
    VideoFeatureExtractor(ExtractConfig cfg, const CsfParams& params);

    std::map<std::string, double> step(const FramePlanes& ref, const FramePlanes& dis);
    long frames_seen() const { return frames_; }

  private:
    ExtractConfig cfg_;
    const CsfParams& params_;
    std::vector<Channel> channels_;
    bool want(const std::string& id) const;
    bool need_lagged_ = false;
    long frames_ = 0;
    WaveletPyramid prev_ref_[3], prev_dis_[3];
};

// Mean over frames; lagged features average their T-1 defined frames. Raises
// if an expected id never got a value (e.g. lagged feature on a 1-frame video).
std::map<std::string, double> pool_video(const std::vector<std::map<std::string, double>>& frames,
                                         const std::vector<std::string>& expected_ids);

// Full-file pipeline: stream both videos, extract, pool. Frame counts must match.
std::map<std::string, double> extract_video_features(const YuvReader& ref, const YuvReader& dis,
                                                     const ExtractConfig& cfg, const CsfParams& params,
                                                     std::vector<std::map<std::string, double>>* per_frame = nullptr);

// The four shipped fusion presets.
struct ModelPreset {
    std::string name;
    std::vector<std::string> feature_ids;
    CsfMethodName csf;
    bool use_sast;
    int levels;
    bool use_chroma;

    ExtractConfig extract_config() const;
};

const std::vector<ModelPreset>& model_presets();
const ModelPreset& preset_by_name(const std::string& name);

}  // namespace funque
