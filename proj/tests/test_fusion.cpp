#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "doctest.h"
#include "funque/eval_select.hpp"
#include "funque/fusion.hpp"
#include "helpers.hpp"

using namespace funque;

namespace {

using Row = std::map<std::string, double>;

const std::vector<std::string> kIds{"f1", "f2", "f3"};

struct Dataset {
    std::vector<Row> rows;
    std::vector<double> mos;
};

// Samples features uniformly and maps them through `law`.
template <typename Law>
Dataset make_data(size_t n, unsigned seed, Law law, double noise_sigma = 0.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Dataset ds;
    for (size_t i = 0; i < n; ++i) {
        double f1 = uni(rng), f2 = uni(rng), f3 = uni(rng);
        ds.rows.push_back({{"f1", f1}, {"f2", f2}, {"f3", f3}});
        ds.mos.push_back(law(f1, f2, f3) + (noise_sigma > 0 ? noise_sigma * gauss(rng) : 0.0));
    }
    return ds;
}

double linear_law(double f1, double f2, double f3) { return 30.0 + 12.0 * f1 - 7.0 * f2 + 2.0 * f3; }

}  // namespace

TEST_CASE("ridge regression recovers a noiseless linear law") {
    Dataset train = make_data(40, 101, linear_law);
    TrainConfig cfg;
    FusionModel m = train_fusion(kIds, train.rows, train.mos, cfg);
    CHECK_FALSE(m.is_svr());

    Dataset test = make_data(10, 102, linear_law);
    for (size_t i = 0; i < test.rows.size(); ++i)
        CHECK(predict_fusion(m, test.rows[i]) == doctest::Approx(test.mos[i]).epsilon(1e-6));

    // With z-scored columns the intercept is exactly the normalized-target mean.
    double t_mean = 0.0;
    for (double v : train.mos) t_mean += (v - m.mos_min) / (m.mos_max - m.mos_min);
    t_mean /= static_cast<double>(train.mos.size());
    CHECK(std::get<LinearModel>(m.regressor).bias == doctest::Approx(t_mean).epsilon(1e-14));
}

TEST_CASE("ridge weights satisfy the normal equations of the stated objective") {
    Dataset train = make_data(50, 103, linear_law, 3.0);
    TrainConfig cfg;
    FusionModel m = train_fusion(kIds, train.rows, train.mos, cfg);
    const auto& lin = std::get<LinearModel>(m.regressor);
    size_t n = train.rows.size(), d = kIds.size();

    // Rebuild the trainer's design from the published normalization and check
    // (Z^T Z + lambda I) w = Z^T (t - mean(t)) without reusing its solver.
    std::vector<std::vector<double>> Z(n, std::vector<double>(d));
    std::vector<double> t(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t p = 0; p < d; ++p)
            Z[i][p] = (train.rows[i].at(kIds[p]) - m.norm_mean[p]) / m.norm_std[p];
        t[i] = (train.mos[i] - m.mos_min) / (m.mos_max - m.mos_min);
    }
    double t_mean = 0.0;
    for (double v : t) t_mean += v;
    t_mean /= static_cast<double>(n);

    for (size_t p = 0; p < d; ++p) {
        double lhs = cfg.ridge_lambda * lin.weights[p];
        double rhs = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double zw = 0.0;
            for (size_t q = 0; q < d; ++q) zw += Z[i][q] * lin.weights[q];
            lhs += Z[i][p] * zw;
            rhs += Z[i][p] * (t[i] - t_mean);
        }
        CHECK(std::abs(lhs - rhs) < 1e-8);
    }

    // Column means of the z-scored design are zero by construction.
    for (size_t p = 0; p < d; ++p) {
        double col = 0.0;
        for (size_t i = 0; i < n; ++i) col += Z[i][p];
        CHECK(std::abs(col) < 1e-9);
    }
}

TEST_CASE("training rejects degenerate inputs by name") {
    Dataset train = make_data(20, 104, linear_law);
    for (auto& r : train.rows) r["f2"] = 0.75;  // flatten one feature
    TrainConfig cfg;
    CHECK_THROWS_WITH_AS(train_fusion(kIds, train.rows, train.mos, cfg), doctest::Contains("f2"), std::exception);

    Dataset ok = make_data(20, 105, linear_law);
    std::vector<double> short_mos(ok.mos.begin(), ok.mos.end() - 1);
    CHECK_THROWS_AS(train_fusion(kIds, ok.rows, short_mos, cfg), std::exception);
    CHECK_THROWS_AS(train_fusion({}, ok.rows, ok.mos, cfg), std::exception);
    CHECK_THROWS_AS(train_fusion(kIds, {ok.rows[0]}, {ok.mos[0]}, cfg), std::exception);

    Dataset missing = make_data(20, 106, linear_law);
    missing.rows[7].erase("f3");
    CHECK_THROWS_WITH_AS(train_fusion(kIds, missing.rows, missing.mos, cfg), doctest::Contains("f3"), std::exception);
}

TEST_CASE("constant MOS trains to a constant predictor") {
    Dataset train = make_data(12, 107, linear_law);
    for (double& v : train.mos) v = 42.0;
    TrainConfig cfg;
    FusionModel m = train_fusion(kIds, train.rows, train.mos, cfg);
    CHECK(predict_fusion(m, train.rows[0]) == 42.0);
    CHECK(predict_fusion(m, make_data(1, 108, linear_law).rows[0]) == 42.0);
}

TEST_CASE("svr training ranks a smooth nonlinear law and is deterministic") {
    auto law = [](double f1, double f2, double f3) { return 20.0 * std::tanh(1.5 * f1) + 8.0 * f2 + 3.0 * f3; };
    Dataset train = make_data(60, 109, law);
    Dataset test = make_data(20, 110, law);
    TrainConfig cfg;
    cfg.kind = TrainConfig::Kind::Svr;

    FusionModel m = train_fusion(kIds, train.rows, train.mos, cfg);
    CHECK(m.is_svr());
    const auto& svr = std::get<SvrModel>(m.regressor);
    CHECK(svr.gamma == 1.0 / 3.0);  // default: one over the feature count
    CHECK(svr.support_vectors.size() == svr.dual_coefs.size());
    CHECK(svr.support_vectors.size() > 0);
    CHECK(svr.support_vectors.size() <= train.rows.size());
    // Dual feasibility: coefficients live in [-C, C] and sum to ~0.
    double beta_sum = 0.0;
    for (double b : svr.dual_coefs) {
        CHECK(std::abs(b) <= cfg.C + 1e-12);
        beta_sum += b;
    }
    CHECK(std::abs(beta_sum) < 1e-9);

    std::vector<double> pred, truth;
    for (size_t i = 0; i < test.rows.size(); ++i) {
        pred.push_back(predict_fusion(m, test.rows[i]));
        truth.push_back(test.mos[i]);
    }
    SroccResult r = srocc(pred, truth);
    CHECK_FALSE(r.degenerate);
    CHECK(r.value >= 0.95);

    FusionModel m2 = train_fusion(kIds, train.rows, train.mos, cfg);
    CHECK(serialize_model(m) == serialize_model(m2));
}

TEST_CASE("model JSON round trips byte-for-byte and preserves predictions") {
    Dataset train = make_data(30, 111, linear_law, 1.0);
    TrainConfig cfg;
    FusionModel m = train_fusion(kIds, train.rows, train.mos, cfg);
    m.preset = "Y-FUNQUE+";
    m.tf.levels = 3;
    m.tf.csf = CsfMethodName::WatsonSW;
    m.tf.use_sast = false;
    m.tf.dh_ratio = 3.0;
    m.use_chroma = true;

    std::string text = serialize_model(m);
    FusionModel back = parse_model(text);
    CHECK(serialize_model(back) == text);
    CHECK(back.preset == "Y-FUNQUE+");
    CHECK(back.feature_ids == kIds);
    CHECK(back.tf.levels == 3);
    CHECK(back.tf.csf == CsfMethodName::WatsonSW);
    CHECK_FALSE(back.tf.use_sast);
    CHECK(back.use_chroma);
    CHECK(back.mos_min == m.mos_min);
    CHECK(back.mos_max == m.mos_max);

    Row probe = make_data(1, 112, linear_law).rows[0];
    CHECK(predict_fusion(back, probe) == predict_fusion(m, probe));

    // The SVR variant round trips too.
    cfg.kind = TrainConfig::Kind::Svr;
    FusionModel ms = train_fusion(kIds, train.rows, train.mos, cfg);
    std::string stext = serialize_model(ms);
    FusionModel sback = parse_model(stext);
    CHECK(serialize_model(sback) == stext);
    CHECK(predict_fusion(sback, probe) == predict_fusion(ms, probe));
}

TEST_CASE("model files save and load losslessly") {
    namespace fs = std::filesystem;
    fs::path dir = testutil::temp_dir("fusion");
    std::string path = (dir / "model.json").string();

    Dataset train = make_data(25, 113, linear_law);
    TrainConfig cfg;
    FusionModel m = train_fusion(kIds, train.rows, train.mos, cfg);
    save_model(m, path);
    FusionModel back = load_model(path);
    CHECK(serialize_model(back) == serialize_model(m));

    CHECK_THROWS_AS(load_model((dir / "missing.json").string()), std::exception);
    fs::remove_all(dir);
}

TEST_CASE("model parsing rejects malformed documents") {
    CHECK_THROWS_AS(parse_model("{not json"), std::exception);
    CHECK_THROWS_AS(parse_model("{\"version\": 1}"), std::exception);
    Dataset train = make_data(10, 114, linear_law);
    TrainConfig cfg;
    std::string text = serialize_model(train_fusion(kIds, train.rows, train.mos, cfg));
    std::string bumped = text;
    bumped.replace(bumped.find("\"version\": 1"), 12, "\"version\": 2");
    CHECK_THROWS_WITH_AS(parse_model(bumped), doctest::Contains("version"), std::exception);

    CHECK_THROWS_WITH_AS(predict_fusion(parse_model(text), Row{{"f1", 0.0}, {"f2", 0.0}}),
                         doctest::Contains("f3"), std::exception);
}

TEST_CASE("format_g17 renders doubles that parse back bitwise") {
    // strtod, not stod: stod raises out_of_range on subnormals like 5e-324.
    auto parse = [](const std::string& s) { return std::strtod(s.c_str(), nullptr); };
    for (double v : {0.1, 1.0 / 3.0, 17.079468445347132, -2.5, 0.0, 1e300, 5e-324, 123456789.123456789}) {
        CHECK(parse(format_g17(v)) == v);
    }
    CHECK(std::signbit(parse(format_g17(-0.0))));
}
