#include "funque/feature_set.hpp"

#include <stdexcept>

#include "funque/features_aux.hpp"
#include "funque/features_dlm.hpp"

namespace funque {

std::string channel_prefix(Channel ch) {
    switch (ch) {
        case Channel::Y: return "Y";
        case Channel::Cb: return "Cb";
        case Channel::Cr: return "Cr";
    }
    throw std::logic_error("channel_prefix: bad enum");
}

std::string feature_id(Channel ch, const std::string& base, int level) {
    return channel_prefix(ch) + "-" + base + "@" + std::to_string(level);
}

bool feature_is_lagged(const std::string& id) {
    return id.find("-TRRED-") != std::string::npos || id.find("-STRRED-") != std::string::npos ||
           id.find("-MAD-Ref@") != std::string::npos || id.find("-MAD-Dis@") != std::string::npos;
}

std::vector<std::string> candidate_feature_ids(const ExtractConfig& cfg) {
    std::vector<std::string> ids;
    int L = cfg.tf.levels;
    std::vector<Channel> chs{Channel::Y};
    if (cfg.use_chroma) {
        chs.push_back(Channel::Cb);
        chs.push_back(Channel::Cr);
    }
    for (Channel ch : chs) {
        for (const char* b : {"SSIM", "ESSIM", "MS-SSIM", "MS-ESSIM"}) ids.push_back(feature_id(ch, b, L));
        ids.push_back(feature_id(ch, "VIF-HV", L));
        for (int l = 1; l <= L; ++l) ids.push_back(feature_id(ch, "VIF-A", l));
        for (const char* b : {"SRRED-HV", "TRRED-HV", "STRRED-HV"}) ids.push_back(feature_id(ch, b, L));
        for (const char* b : {"SRRED-A", "TRRED-A", "STRRED-A"})
            for (int l = 1; l <= L; ++l) ids.push_back(feature_id(ch, b, l));
        for (int l = 1; l <= L; ++l) ids.push_back(feature_id(ch, "DLM-S", l));
        for (const char* b : {"Blur", "Edge", "dTL-SAI", "dTL-Blur", "MAD-Ref", "MAD-Dis", "MAD"})
            ids.push_back(feature_id(ch, b, L));
    }
    return ids;
}

VideoFeatureExtractor::VideoFeatureExtractor(ExtractConfig cfg, const CsfParams& params)
    : cfg_(std::move(cfg)), params_(params) {
    cfg_.tf.validate();
    channels_.push_back(Channel::Y);
    if (cfg_.use_chroma) {
        channels_.push_back(Channel::Cb);
        channels_.push_back(Channel::Cr);
    }
    if (!cfg_.only.empty()) {
        auto candidates = candidate_feature_ids(cfg_);
        for (const auto& id : cfg_.only) {
            bool known = false;
            for (const auto& c : candidates)
                if (c == id) {
                    known = true;
                    break;
                }
            if (!known)
                throw std::runtime_error("feature '" + id + "' is not producible by this configuration");
        }
    }
    std::set<std::string> wanted = cfg_.only;
    if (wanted.empty()) {
        auto all = candidate_feature_ids(cfg_);
        wanted.insert(all.begin(), all.end());
    }
    for (const auto& id : wanted)
        if (feature_is_lagged(id)) need_lagged_ = true;
}

bool VideoFeatureExtractor::want(const std::string& id) const {
    return cfg_.only.empty() || cfg_.only.count(id) > 0;
}

std::map<std::string, double> VideoFeatureExtractor::step(const FramePlanes& ref, const FramePlanes& dis) {
    if (!ref.y.same_shape(dis.y)) throw std::runtime_error("reference/distorted frame size mismatch");
    std::map<std::string, double> out;
    int L = cfg_.tf.levels;

    for (Channel ch : channels_) {
        const Plane& pr = ch == Channel::Y ? ref.y : (ch == Channel::Cb ? ref.cb : ref.cr);
        const Plane& pd = ch == Channel::Y ? dis.y : (ch == Channel::Cb ? dis.cb : dis.cr);
        WaveletPyramid px = unified_transform(pr, cfg_.tf, ch, params_);
        WaveletPyramid py = unified_transform(pd, cfg_.tf, ch, params_);
        int ci = static_cast<int>(ch);

        bool want_ssim = false;
        for (const char* b : {"SSIM", "ESSIM", "MS-SSIM", "MS-ESSIM"})
            if (want(feature_id(ch, b, L))) want_ssim = true;
        if (want_ssim) {
            ScaleStats st = scale_stats(px, py, L);
            if (want(feature_id(ch, "SSIM", L))) out[feature_id(ch, "SSIM", L)] = wavelet_ssim(st, L, cfg_.ssim);
            if (want(feature_id(ch, "ESSIM", L))) out[feature_id(ch, "ESSIM", L)] = wavelet_essim(st, L, cfg_.ssim);
            if (want(feature_id(ch, "MS-SSIM", L))) out[feature_id(ch, "MS-SSIM", L)] = ms_ssim(st, L, cfg_.ssim);
            if (want(feature_id(ch, "MS-ESSIM", L))) out[feature_id(ch, "MS-ESSIM", L)] = ms_essim(st, L, cfg_.ssim);
        }

        if (want(feature_id(ch, "VIF-HV", L))) out[feature_id(ch, "VIF-HV", L)] = vif_hv(px, py, L, cfg_.info);
        for (int l = 1; l <= L; ++l)
            if (want(feature_id(ch, "VIF-A", l))) out[feature_id(ch, "VIF-A", l)] = vif_a(px, py, l, cfg_.info);

        bool want_strred_hv = want(feature_id(ch, "STRRED-HV", L));
        bool want_srred_hv = want(feature_id(ch, "SRRED-HV", L)) || want_strred_hv;
        bool want_trred_hv = want(feature_id(ch, "TRRED-HV", L)) || want_strred_hv;
        double srred_hv_val = 0.0;
        if (want_srred_hv) {
            srred_hv_val = srred_hv(px, py, L, cfg_.info);
            if (want(feature_id(ch, "SRRED-HV", L))) out[feature_id(ch, "SRRED-HV", L)] = srred_hv_val;
        }
        if (want_trred_hv && frames_ > 0) {
            double t = trred_hv(prev_ref_[ci], px, prev_dis_[ci], py, L, cfg_.info);
            if (want(feature_id(ch, "TRRED-HV", L))) out[feature_id(ch, "TRRED-HV", L)] = t;
            if (want_strred_hv) out[feature_id(ch, "STRRED-HV", L)] = srred_hv_val * t;
        }
        for (int l = 1; l <= L; ++l) {
            bool want_strred_a = want(feature_id(ch, "STRRED-A", l));
            bool want_srred_a = want(feature_id(ch, "SRRED-A", l)) || want_strred_a;
            bool want_trred_a = want(feature_id(ch, "TRRED-A", l)) || want_strred_a;
            double srred_a_val = 0.0;
            if (want_srred_a) {
                srred_a_val = srred_a(px, py, l, cfg_.info);
                if (want(feature_id(ch, "SRRED-A", l))) out[feature_id(ch, "SRRED-A", l)] = srred_a_val;
            }
            if (want_trred_a && frames_ > 0) {
                double t = trred_a(prev_ref_[ci], px, prev_dis_[ci], py, l, cfg_.info);
                if (want(feature_id(ch, "TRRED-A", l))) out[feature_id(ch, "TRRED-A", l)] = t;
                if (want_strred_a) out[feature_id(ch, "STRRED-A", l)] = srred_a_val * t;
            }
        }

        for (int l = 1; l <= L; ++l)
            if (want(feature_id(ch, "DLM-S", l))) out[feature_id(ch, "DLM-S", l)] = dlm_scale(px, py, l);

        if (want(feature_id(ch, "Blur", L)) || want(feature_id(ch, "Edge", L))) {
            auto [blur, edge] = blur_edge(px, py, L);
            if (want(feature_id(ch, "Blur", L))) out[feature_id(ch, "Blur", L)] = blur;
            if (want(feature_id(ch, "Edge", L))) out[feature_id(ch, "Edge", L)] = edge;
        }
        if (want(feature_id(ch, "dTL-SAI", L))) out[feature_id(ch, "dTL-SAI", L)] = delta_tl_sai(px, py, L);
        if (want(feature_id(ch, "dTL-Blur", L))) out[feature_id(ch, "dTL-Blur", L)] = delta_tl_blur(px, py, L);
        if (frames_ > 0) {
            if (want(feature_id(ch, "MAD-Ref", L)))
                out[feature_id(ch, "MAD-Ref", L)] = mad_between(px.level(L).a, prev_ref_[ci].level(L).a);
            if (want(feature_id(ch, "MAD-Dis", L)))
                out[feature_id(ch, "MAD-Dis", L)] = mad_between(py.level(L).a, prev_dis_[ci].level(L).a);
        }
        if (want(feature_id(ch, "MAD", L))) out[feature_id(ch, "MAD", L)] = mad_between(px.level(L).a, py.level(L).a);

        if (need_lagged_) {
            prev_ref_[ci] = std::move(px);
            prev_dis_[ci] = std::move(py);
        }
    }
    ++frames_;
    return out;
}

std::map<std::string, double> pool_video(const std::vector<std::map<std::string, double>>& frames,
                                         const std::vector<std::string>& expected_ids) {
    if (frames.empty()) throw std::runtime_error("pool_video: no frames");
    std::map<std::string, double> sums;
    std::map<std::string, long> counts;
    for (const auto& f : frames)
        for (const auto& [id, val] : f) {
            sums[id] += val;
            counts[id] += 1;
        }
    std::map<std::string, double> out;
    for (const auto& id : expected_ids) {
        auto it = counts.find(id);
        if (it == counts.end())
            throw std::runtime_error("pool_video: feature '" + id +
                                     "' has no frames to pool (lagged feature on a single-frame video?)");
        out[id] = sums[id] / static_cast<double>(it->second);
    }
    return out;
}

std::map<std::string, double> extract_video_features(const YuvReader& ref, const YuvReader& dis,
                                                     const ExtractConfig& cfg, const CsfParams& params,
                                                     std::vector<std::map<std::string, double>>* per_frame) {
    if (ref.frame_count() != dis.frame_count())
        throw std::runtime_error("frame count mismatch (" + std::to_string(ref.frame_count()) + " vs " +
                                 std::to_string(dis.frame_count()) + ")");
    VideoFeatureExtractor ex(cfg, params);
    std::vector<std::map<std::string, double>> frames;
    for (long t = 0; t < ref.frame_count(); ++t) frames.push_back(ex.step(ref.read_frame(t), dis.read_frame(t)));
    std::vector<std::string> expected;
    if (cfg.only.empty())
        expected = candidate_feature_ids(cfg);
    else
        expected.assign(cfg.only.begin(), cfg.only.end());
    if (per_frame) *per_frame = frames;
    return pool_video(frames, expected);
}

ExtractConfig ModelPreset::extract_config() const {
    ExtractConfig cfg;
    cfg.tf.levels = levels;
    cfg.tf.csf = csf;
    cfg.tf.use_sast = use_sast;
    cfg.use_chroma = use_chroma;
    cfg.only.insert(feature_ids.begin(), feature_ids.end());
    return cfg;
}

const std::vector<ModelPreset>& model_presets() {
    static const std::vector<ModelPreset> presets = {
        {"Y-FUNQUE+",
         {"Y-MS-ESSIM@2", "Y-MAD-Ref@2", "Y-DLM-S@2"},
         CsfMethodName::NadenauSW,
         true,
         2,
         false},
        {"3C-FUNQUE+",
         {"Y-MS-ESSIM@2", "Y-MAD-Dis@2", "Y-DLM-S@2", "Y-SRRED-HV@2", "Y-TRRED-HV@2", "Cb-Edge@2", "Cr-MAD@2"},
         CsfMethodName::LiSW,
         true,
         2,
         true},
        {"FS-Y-FUNQUE+",
         {"Y-MS-ESSIM@2", "Y-dTL-SAI@2", "Y-MAD-Dis@2", "Y-DLM-S@2", "Y-STRRED-HV@2"},
         CsfMethodName::NadenauSpat,
         false,
         2,
         false},
        {"FS-3C-FUNQUE+",
         {"Y-MS-ESSIM@3", "Y-dTL-SAI@3", "Y-DLM-S@3", "Cb-MAD-Dis@3", "Cb-SRRED-HV@3", "Cb-TRRED-HV@3", "Cb-Edge@3",
          "Cr-MAD@3", "Cr-Blur@3"},
         CsfMethodName::WatsonSW,
         false,
         3,
         true},
    };
    return presets;
}

const ModelPreset& preset_by_name(const std::string& name) {
    for (const auto& p : model_presets())
        if (p.name == name) return p;
    throw std::runtime_error("unknown preset '" + name + "' (expected Y-FUNQUE+, 3C-FUNQUE+, FS-Y-FUNQUE+, FS-3C-FUNQUE+)");
}

}  // namespace funque
