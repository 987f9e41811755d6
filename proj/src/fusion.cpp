#include "funque/fusion.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace funque {

static double feature_value(const std::map<std::string, double>& fv, const std::string& id, const char* who) {
    auto it = fv.find(id);
    if (it == fv.end()) throw std::runtime_error(std::string(who) + ": missing feature '" + id + "'");
    return it->second;
}

// Solves A w = b in place by Gauss-Jordan with partial pivoting; A is square.
static std::vector<double> solve_linear_system(std::vector<std::vector<double>> A, std::vector<double> b) {
    size_t n = A.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (A[piv][col] == 0.0) throw std::runtime_error("linear solve: singular system");
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        double d = A[col][col];
        for (size_t c = col; c < n; ++c) A[col][c] /= d;
        b[col] /= d;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0.0) continue;
            double f = A[r][col];
            for (size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    return b;
}

static LinearModel fit_ridge(const std::vector<std::vector<double>>& X, const std::vector<double>& t, double lambda) {
    size_t n = X.size(), d = X[0].size();
    double t_mean = 0.0;
    for (double v : t) t_mean += v;
    t_mean /= static_cast<double>(n);

    std::vector<std::vector<double>> A(d, std::vector<double>(d, 0.0));
    std::vector<double> b(d, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t p = 0; p < d; ++p) {
            for (size_t q = 0; q < d; ++q) A[p][q] += X[i][p] * X[i][q];
            b[p] += X[i][p] * (t[i] - t_mean);
        }
    for (size_t p = 0; p < d; ++p) A[p][p] += lambda;

    LinearModel m;
    m.weights = solve_linear_system(std::move(A), std::move(b));
    // Features are z-scored (column means 0), so the intercept is the target mean.
    m.bias = t_mean;
    return m;
}

static double rbf_kernel(const std::vector<double>& a, const std::vector<double>& b, double gamma) {
    double ss = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        ss += d * d;
    }
    return std::exp(-gamma * ss);
}

// Epsilon-SVR dual solved by sequential minimal optimization on the doubled
// variable vector [alpha; alpha*], constraint sum(alpha - alpha*) = 0. Working
// pairs are chosen by maximal KKT violation with lowest-index tie-breaking, so
// training is fully deterministic.
static SvrModel fit_svr(const std::vector<std::vector<double>>& X, const std::vector<double>& t, const TrainConfig& cfg) {
    size_t n = X.size();
    double gamma = cfg.gamma > 0 ? cfg.gamma : 1.0 / static_cast<double>(X[0].size());

    std::vector<double> K(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j <= i; ++j) K[i * n + j] = K[j * n + i] = rbf_kernel(X[i], X[j], gamma);

    size_t m2 = 2 * n;  // variables: k < n are alpha (sign +1), k >= n are alpha* (sign -1)
    auto sign_of = [&](size_t k) { return k < n ? 1.0 : -1.0; };
    auto base_of = [&](size_t k) { return k < n ? k : k - n; };

    std::vector<double> a(m2, 0.0);  // box [0, C]
    std::vector<double> G(m2);       // gradient of the dual objective
    for (size_t k = 0; k < m2; ++k) G[k] = cfg.epsilon + (k < n ? -t[k] : t[k - n]);

    auto Q = [&](size_t p, size_t q) { return sign_of(p) * sign_of(q) * K[base_of(p) * n + base_of(q)]; };

    long iter = 0;
    double m_val = 0, M_val = 0;
    for (;; ++iter) {
        if (iter >= cfg.max_iters)
            throw std::runtime_error("svr training did not converge within " + std::to_string(cfg.max_iters) +
                                     " iterations (final gap " + std::to_string(m_val - M_val) + ")");
        // Maximal-violation pair: i from the "can increase along +y" set,
        // j from the "can decrease" set.
        size_t i = m2, j = m2;
        m_val = -1e300;
        M_val = 1e300;
        for (size_t k = 0; k < m2; ++k) {
            double y = sign_of(k);
            bool in_up = (y > 0 && a[k] < cfg.C) || (y < 0 && a[k] > 0);
            bool in_low = (y > 0 && a[k] > 0) || (y < 0 && a[k] < cfg.C);
            double v = -y * G[k];
            if (in_up && v > m_val) {
                m_val = v;
                i = k;
            }
            if (in_low && v < M_val) {
                M_val = v;
                j = k;
            }
        }
        if (i == m2 || j == m2 || m_val - M_val <= cfg.kkt_tol) break;

        // Step s moves a[i] by +yi*s and a[j] by -yj*s, which keeps the
        // equality constraint sum(y_k a_k) invariant for any sign pattern.
        double yi = sign_of(i), yj = sign_of(j);
        double quad = Q(i, i) + Q(j, j) - 2.0 * yi * yj * Q(i, j);
        if (quad <= 0) quad = 1e-12;
        double s = (-yi * G[i] + yj * G[j]) / quad;
        double lo = -1e300, hi = 1e300;
        if (yi > 0) {
            lo = std::max(lo, -a[i]);
            hi = std::min(hi, cfg.C - a[i]);
        } else {
            lo = std::max(lo, a[i] - cfg.C);
            hi = std::min(hi, a[i]);
        }
        if (yj > 0) {
            lo = std::max(lo, a[j] - cfg.C);
            hi = std::min(hi, a[j]);
        } else {
            lo = std::max(lo, -a[j]);
            hi = std::min(hi, cfg.C - a[j]);
        }
        if (s < lo) s = lo;
        if (s > hi) s = hi;
        double old_ai = a[i], old_aj = a[j];
        a[i] = std::min(std::max(a[i] + yi * s, 0.0), cfg.C);
        a[j] = std::min(std::max(a[j] - yj * s, 0.0), cfg.C);
        double di = a[i] - old_ai, dj = a[j] - old_aj;
        if (di == 0.0 && dj == 0.0) break;  // numerically stuck at the boundary
        for (size_t k = 0; k < m2; ++k) G[k] += Q(k, i) * di + Q(k, j) * dj;
    }

    SvrModel m;
    m.gamma = gamma;
    m.C = cfg.C;
    m.epsilon = cfg.epsilon;
    m.bias = (m_val + M_val) / 2.0;
    for (size_t k = 0; k < n; ++k) {
        double beta = a[k] - a[k + n];
        if (beta != 0.0) {
            m.support_vectors.push_back(X[k]);
            m.dual_coefs.push_back(beta);
        }
    }
    return m;
}

FusionModel train_fusion(const std::vector<std::string>& feature_ids,
                         const std::vector<std::map<std::string, double>>& features, const std::vector<double>& mos,
                         const TrainConfig& cfg) {
    if (feature_ids.empty()) throw std::runtime_error("empty feature list");
    if (features.size() < 2) throw std::runtime_error("need at least 2 samples");
    if (features.size() != mos.size()) throw std::runtime_error("feature/mos count mismatch");
    size_t n = features.size(), d = feature_ids.size();

    FusionModel m;
    m.feature_ids = feature_ids;

    std::vector<std::vector<double>> X(n, std::vector<double>(d));
    for (size_t i = 0; i < n; ++i)
        for (size_t p = 0; p < d; ++p) X[i][p] = feature_value(features[i], feature_ids[p], "train");

    m.norm_mean.assign(d, 0.0);
    m.norm_std.assign(d, 0.0);
    for (size_t p = 0; p < d; ++p) {
        double mean = 0.0;
        for (size_t i = 0; i < n; ++i) mean += X[i][p];
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double dd = X[i][p] - mean;
            ss += dd * dd;
        }
        double sd = std::sqrt(ss / static_cast<double>(n));
        if (sd == 0.0)
            throw std::runtime_error("feature '" + feature_ids[p] + "' has zero variance on the training set");
        m.norm_mean[p] = mean;
        m.norm_std[p] = sd;
        for (size_t i = 0; i < n; ++i) X[i][p] = (X[i][p] - mean) / sd;
    }

    m.mos_min = mos[0];
    m.mos_max = mos[0];
    for (double v : mos) {
        m.mos_min = std::min(m.mos_min, v);
        m.mos_max = std::max(m.mos_max, v);
    }
    double range = m.mos_max - m.mos_min;
    std::vector<double> t(n);
    for (size_t i = 0; i < n; ++i) t[i] = range == 0.0 ? 0.0 : (mos[i] - m.mos_min) / range;

    if (cfg.kind == TrainConfig::Kind::Linear)
        m.regressor = fit_ridge(X, t, cfg.ridge_lambda);
    else
        m.regressor = fit_svr(X, t, cfg);
    return m;
}

double predict_fusion(const FusionModel& m, const std::map<std::string, double>& features) {
    size_t d = m.feature_ids.size();
    std::vector<double> x(d);
    for (size_t p = 0; p < d; ++p)
        x[p] = (feature_value(features, m.feature_ids[p], "predict") - m.norm_mean[p]) / m.norm_std[p];
    double s;
    if (const auto* lin = std::get_if<LinearModel>(&m.regressor)) {
        s = lin->bias;
        for (size_t p = 0; p < d; ++p) s += lin->weights[p] * x[p];
    } else {
        const auto& svr = std::get<SvrModel>(m.regressor);
        s = svr.bias;
        for (size_t i = 0; i < svr.support_vectors.size(); ++i)
            s += svr.dual_coefs[i] * rbf_kernel(svr.support_vectors[i], x, svr.gamma);
    }
    return m.mos_min + s * (m.mos_max - m.mos_min);
}

// ---- serialization ----------------------------------------------------------

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

static void emit_double_array(std::ostringstream& os, const std::vector<double>& a) {
    os << "[";
    for (size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << format_g17(a[i]);
    os << "]";
}

static void emit_string_array(std::ostringstream& os, const std::vector<std::string>& a) {
    os << "[";
    for (size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << "\"" << a[i] << "\"";
    os << "]";
}

std::string serialize_model(const FusionModel& m) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"version\": 1,\n";
    os << "  \"preset\": \"" << m.preset << "\",\n";
    os << "  \"feature_ids\": ";
    emit_string_array(os, m.feature_ids);
    os << ",\n";
    os << "  \"norm\": {\"mean\": ";
    emit_double_array(os, m.norm_mean);
    os << ", \"std\": ";
    emit_double_array(os, m.norm_std);
    os << "},\n";
    os << "  \"regressor\": {";
    if (const auto* lin = std::get_if<LinearModel>(&m.regressor)) {
        os << "\"kind\": \"linear\", \"weights\": ";
        emit_double_array(os, lin->weights);
        os << ", \"bias\": " << format_g17(lin->bias);
    } else {
        const auto& svr = std::get<SvrModel>(m.regressor);
        os << "\"kind\": \"svr\", \"gamma\": " << format_g17(svr.gamma) << ", \"C\": " << format_g17(svr.C)
           << ", \"epsilon\": " << format_g17(svr.epsilon) << ", \"bias\": " << format_g17(svr.bias)
           << ", \"support_vectors\": [";
        for (size_t i = 0; i < svr.support_vectors.size(); ++i) {
            os << (i ? "," : "");
            emit_double_array(os, svr.support_vectors[i]);
        }
        os << "], \"dual_coefs\": ";
        emit_double_array(os, svr.dual_coefs);
    }
    os << "},\n";
    os << "  \"target_range\": {\"min\": " << format_g17(m.mos_min) << ", \"max\": " << format_g17(m.mos_max) << "},\n";
    os << "  \"transform\": {\"csf\": \"" << csf_method_name(m.tf.csf) << "\", \"levels\": " << m.tf.levels
       << ", \"sast\": " << (m.tf.use_sast ? "true" : "false") << ", \"dh_ratio\": " << format_g17(m.tf.dh_ratio)
       << ", \"channels\": \"" << (m.use_chroma ? "ycbcr" : "y") << "\"}\n";
    os << "}\n";
    return os.str();
}

FusionModel parse_model(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        FusionModel m;
        if (j.at("version").get<int>() != 1) throw std::runtime_error("unsupported model version");
        m.preset = j.at("preset").get<std::string>();
        m.feature_ids = j.at("feature_ids").get<std::vector<std::string>>();
        m.norm_mean = j.at("norm").at("mean").get<std::vector<double>>();
        m.norm_std = j.at("norm").at("std").get<std::vector<double>>();
        const auto& r = j.at("regressor");
        std::string kind = r.at("kind").get<std::string>();
        if (kind == "linear") {
            LinearModel lin;
            lin.weights = r.at("weights").get<std::vector<double>>();
            lin.bias = r.at("bias").get<double>();
            m.regressor = std::move(lin);
        } else if (kind == "svr") {
            SvrModel svr;
            svr.gamma = r.at("gamma").get<double>();
            svr.C = r.at("C").get<double>();
            svr.epsilon = r.at("epsilon").get<double>();
            svr.bias = r.at("bias").get<double>();
            svr.support_vectors = r.at("support_vectors").get<std::vector<std::vector<double>>>();
            svr.dual_coefs = r.at("dual_coefs").get<std::vector<double>>();
            m.regressor = std::move(svr);
        } else {
            throw std::runtime_error("unknown regressor kind '" + kind + "'");
        }
        m.mos_min = j.at("target_range").at("min").get<double>();
        m.mos_max = j.at("target_range").at("max").get<double>();
        const auto& tf = j.at("transform");
        m.tf.csf = parse_csf_method(tf.at("csf").get<std::string>());
        m.tf.levels = tf.at("levels").get<int>();
        m.tf.use_sast = tf.at("sast").get<bool>();
        m.tf.dh_ratio = tf.at("dh_ratio").get<double>();
        m.use_chroma = tf.at("channels").get<std::string>() == "ycbcr";
        if (m.norm_mean.size() != m.feature_ids.size() || m.norm_std.size() != m.feature_ids.size())
            throw std::runtime_error("normalization arrays do not match the feature list");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("model file missing required field: ") + e.what());
    }
}

void save_model(const FusionModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
    out << serialize_model(m);
    if (!out) throw std::runtime_error("model write failed: " + path);
}

FusionModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

}  // namespace funque
