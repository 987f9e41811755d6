#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "funque/feature_set.hpp"

namespace funque {

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
};

// RBF-kernel epsilon-SVR; support vectors stored in z-scored feature space.
struct SvrModel {
    double gamma = 0.0, C = 1.0, epsilon = 0.1, bias = 0.0;
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_coefs;  // beta_i = alpha_i - alpha_i*
};

struct TrainConfig {
    enum class Kind { Linear, Svr } kind = Kind::Linear;
    double ridge_lambda = 1e-6;
    double C = 1.0;
    double epsilon = 0.1;
    double gamma = 0.0;  // 0: default to 1/num_features
    double kkt_tol = 1e-3;
    long max_iters = 10000000;
};

// A trained fusion model: feature order, normalization fitted on the training
// set, the regressor, the MOS range used to scale targets, and the transform
// configuration its features were extracted with.
struct FusionModel {
    std::string preset = "custom";
    std::vector<std::string> feature_ids;
    std::vector<double> norm_mean, norm_std;
    std::variant<LinearModel, SvrModel> regressor;
    double mos_min = 0.0, mos_max = 1.0;
    TransformConfig tf;
    bool use_chroma = false;

    bool is_svr() const { return std::holds_alternative<SvrModel>(regressor); }
};

// Fits normalization + regressor. features[i] must contain every id in
// feature_ids; mos are raw subjective scores. Zero-variance features are
// rejected by name.
FusionModel train_fusion(const std::vector<std::string>& feature_ids,
                         const std::vector<std::map<std::string, double>>& features, const std::vector<double>& mos,
                         const TrainConfig& cfg);

double predict_fusion(const FusionModel& m, const std::map<std::string, double>& features);

// Shortest round-trippable decimal rendering (17 significant digits).
std::string format_g17(double v);

// Self-describing JSON document; all numbers carry 17 significant digits so
// that serialize(parse(s)) == s.
std::string serialize_model(const FusionModel& m);
FusionModel parse_model(const std::string& text);
void save_model(const FusionModel& m, const std::string& path);
FusionModel load_model(const std::string& path);

}  // namespace funque
