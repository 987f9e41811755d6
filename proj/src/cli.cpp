#include "funque/cli.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "funque/feature_set.hpp"
#include "funque/parallel.hpp"

namespace funque {

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string stem_of(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

const CsfParams& params_for(const std::string& path, CsfParams& storage) {
    if (path.empty()) return default_csf_params();
    storage = load_csf_params_file(path);
    return storage;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += v[i];
    }
    return s;
}

bool same_transform(const FeatureCacheMeta& a, const FeatureCacheMeta& b) {
    return a.tf.csf == b.tf.csf && a.tf.levels == b.tf.levels && a.tf.use_sast == b.tf.use_sast &&
           a.tf.dh_ratio == b.tf.dh_ratio && a.chroma == b.chroma;
}

// Loads every cache plus its sidecar and insists they were produced by one
// transform configuration and code version, so the rows are comparable.
std::vector<DbFeatures> read_caches_checked(const std::vector<std::string>& paths, FeatureCacheMeta& meta) {
    if (paths.empty()) throw std::invalid_argument("no feature caches given");
    std::vector<DbFeatures> dbs;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        FeatureCacheMeta m = read_feature_cache_meta(paths[i]);
        if (i == 0) {
            meta = m;
        } else if (!same_transform(meta, m) || meta.version != m.version) {
            throw std::invalid_argument("cache '" + paths[i] + "' was built with a different transform config or version than '" +
                                        paths[0] + "'; regenerate the caches together");
        }
        dbs.push_back(read_feature_cache(paths[i]));
    }
    return dbs;
}

}  // namespace

int cmd_extract(const ExtractCmd& c, std::ostream& out, std::ostream& err) {
    DatasetManifest manifest;
    CsfParams storage;
    ExtractConfig cfg;
    std::vector<std::string> ids;
    const CsfParams* params = nullptr;
    try {
        manifest = load_manifest(c.manifest_path);
        params = &params_for(c.csf_params_path, storage);
        cfg.tf = c.tf;
        cfg.use_chroma = c.use_chroma;
        cfg.tf.validate();
        ids = candidate_feature_ids(cfg);
        if (manifest.rows.empty()) throw std::invalid_argument("manifest '" + c.manifest_path + "' has no rows");
    } catch (const std::exception& e) {
        err << "extract: " << e.what() << "\n";
        return 2;
    }

    const std::size_t n = manifest.rows.size();
    std::vector<std::map<std::string, double>> pooled(n);
    std::vector<std::string> row_errors(n);
    parallel_for(n, c.jobs, [&](std::size_t i) {
        const ManifestRow& row = manifest.rows[i];
        try {
            YuvReader ref(row.ref_path, row.spec.width, row.spec.height, row.spec.bit_depth);
            YuvReader dis(row.dis_path, row.spec.width, row.spec.height, row.spec.bit_depth);
            pooled[i] = extract_video_features(ref, dis, cfg, *params);
        } catch (const std::exception& e) {
            row_errors[i] = e.what();
        }
    });

    DbFeatures db;
    db.name = stem_of(c.manifest_path);
    db.feature_ids = ids;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!row_errors[i].empty()) {
            ++failed;
            err << "extract: row " << (i + 1) << " (" << manifest.rows[i].dis_path << "): " << row_errors[i] << "\n";
            continue;
        }
        db.ref_paths.push_back(manifest.rows[i].ref_path);
        db.dis_paths.push_back(manifest.rows[i].dis_path);
        db.mos.push_back(manifest.rows[i].mos);
        std::vector<double> vals;
        vals.reserve(ids.size());
        for (const auto& id : ids) vals.push_back(pooled[i].at(id));
        db.rows.push_back(std::move(vals));
    }
    try {
        write_feature_cache(c.out_csv, db, cfg.tf, cfg.use_chroma);
    } catch (const std::exception& e) {
        err << "extract: " << e.what() << "\n";
        return 2;
    }
    out << "wrote " << db.rows.size() << " of " << n << " rows (" << ids.size() << " features) to " << c.out_csv
        << "\n";
    return failed ? 1 : 0;
}

int cmd_score(const ScoreCmd& c, std::ostream& out, std::ostream& err) {
    try {
        FusionModel model = load_model(c.model_path);
        CsfParams storage;
        const CsfParams& params = params_for(c.csf_params_path, storage);
        ExtractConfig cfg;
        cfg.tf = model.tf;
        cfg.use_chroma = model.use_chroma;
        cfg.only.insert(model.feature_ids.begin(), model.feature_ids.end());
        YuvReader ref(c.ref_path, c.width, c.height, c.bit_depth);
        YuvReader dis(c.dis_path, c.width, c.height, c.bit_depth);
        std::vector<std::map<std::string, double>> frames;
        std::map<std::string, double> pooled =
            extract_video_features(ref, dis, cfg, params, c.per_frame ? &frames : nullptr);
        if (c.per_frame) {
            out << "frame";
            for (const auto& id : model.feature_ids) out << ',' << id;
            out << '\n';
            for (std::size_t t = 0; t < frames.size(); ++t) {
                out << t;
                for (const auto& id : model.feature_ids) {
                    auto it = frames[t].find(id);
                    out << ',' << (it == frames[t].end() ? "" : format_g17(it->second));
                }
                out << '\n';
            }
        }
        out << fmt6(predict_fusion(model, pooled)) << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "score: " << e.what() << "\n";
        return 2;
    }
}

int cmd_train(const TrainCmd& c, std::ostream& out, std::ostream& err) {
    try {
        FeatureCacheMeta meta;
        std::vector<DbFeatures> dbs = read_caches_checked(c.cache_paths, meta);
        std::vector<std::string> ids = c.features;
        std::string preset_name = "custom";
        if (!c.preset.empty()) {
            const ModelPreset& p = preset_by_name(c.preset);
            if (p.csf != meta.tf.csf || p.levels != meta.tf.levels || p.use_sast != meta.tf.use_sast ||
                p.use_chroma != meta.chroma)
                throw std::invalid_argument("preset '" + c.preset +
                                            "' expects a different transform config than the caches were built with");
            ids = p.feature_ids;
            preset_name = p.name;
        }
        if (ids.empty()) throw std::invalid_argument("no features: give --preset or --features");

        std::vector<std::map<std::string, double>> feats;
        std::vector<double> mos;
        for (const DbFeatures& db : dbs) {
            for (std::size_t v = 0; v < db.rows.size(); ++v) {
                std::map<std::string, double> m;
                for (const auto& id : ids) m[id] = db.rows[v][db.col(id)];
                feats.push_back(std::move(m));
                mos.push_back(db.mos[v]);
            }
        }
        FusionModel model = train_fusion(ids, feats, mos, c.train);
        model.preset = preset_name;
        model.tf = meta.tf;
        model.use_chroma = meta.chroma;
        save_model(model, c.out_model);
        out << "trained " << (c.train.kind == TrainConfig::Kind::Svr ? "svr" : "linear") << " model on " << mos.size()
            << " videos (" << ids.size() << " features) -> " << c.out_model << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "train: " << e.what() << "\n";
        return 2;
    }
}

int cmd_select(const SelectCmd& c, std::ostream& out, std::ostream& err) {
    try {
        FeatureCacheMeta meta;
        std::vector<DbFeatures> dbs = read_caches_checked(c.cache_paths, meta);
        if (dbs.size() < 2) throw std::invalid_argument("selection needs at least 2 database caches");
        std::vector<FeatureBucket> buckets = standard_buckets(meta.tf.levels, meta.chroma);
        for (const auto& b : buckets)
            for (const auto& g : b.groups)
                for (const auto& id : g.ids)
                    for (const auto& db : dbs) (void)db.col(id);  // fail fast on stale caches

        CgfsResult res = cgfs(buckets, dbs, c.train, c.jobs);

        if (!c.out_report.empty()) {
            std::ostringstream csv;
            csv << "pass,bucket,features,cross_db_srocc,improved\n";
            for (const auto& ev : res.trail)
                csv << ev.pass << ',' << ev.bucket << ',' << join(ev.group, ";") << ',' << format_g17(ev.cross_db)
                    << ',' << (ev.improved ? 1 : 0) << '\n';
            std::ofstream f(c.out_report, std::ios::binary | std::ios::trunc);
            if (!f) throw std::runtime_error("cannot open '" + c.out_report + "' for writing");
            f << csv.str();
        }
        out << "evaluations: " << res.trail.size() << " over " << res.passes << " passes\n";
        for (std::size_t i = 0; i < res.chosen_buckets.size(); ++i) out << "bucket " << res.chosen_buckets[i] << "\n";
        out << "selected: " << join(res.selected, ",") << "\n";
        out << "cross_db_srocc: " << fmt6(res.best) << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "select: " << e.what() << "\n";
        return 2;
    }
}

int cmd_eval(const EvalCmd& c, std::ostream& out, std::ostream& err) {
    CrossDbResult res;
    std::vector<DbFeatures> dbs;
    try {
        FeatureCacheMeta meta;
        dbs = read_caches_checked(c.cache_paths, meta);
        if (dbs.size() < 2) throw std::invalid_argument("evaluation needs at least 2 database caches");
        std::vector<std::string> ids = c.features;
        if (!c.preset.empty()) ids = preset_by_name(c.preset).feature_ids;
        if (ids.empty()) throw std::invalid_argument("no features: give --preset or --features");
        res = cross_db_srocc(ids, dbs, c.train);

        std::ostringstream csv;
        csv << "train\\test";
        for (const auto& db : dbs) csv << ',' << db.name;
        csv << '\n';
        std::vector<std::vector<std::string>> cells(dbs.size(), std::vector<std::string>(dbs.size()));
        for (const auto& e : res.entries) cells[e.train_db][e.test_db] = e.failed ? "failed" : fmt6(e.srocc_value);
        for (std::size_t i = 0; i < dbs.size(); ++i) {
            csv << dbs[i].name;
            for (std::size_t j = 0; j < dbs.size(); ++j) csv << ',' << cells[i][j];
            csv << '\n';
        }
        csv << "FMean";
        for (std::size_t j = 0; j < dbs.size(); ++j) csv << ',' << fmt6(res.per_test_avg[j]);
        csv << '\n';
        csv << "Overall," << fmt6(res.fisher_overall) << '\n';

        out << csv.str();
        if (!c.out_report.empty()) {
            std::ofstream f(c.out_report, std::ios::binary | std::ios::trunc);
            if (!f) throw std::runtime_error("cannot open '" + c.out_report + "' for writing");
            f << csv.str();
        }
    } catch (const std::exception& e) {
        err << "eval: " << e.what() << "\n";
        return 2;
    }
    if (res.incomplete) {
        err << "eval: some train/test pairs failed; result incomplete\n";
        return 1;
    }
    return 0;
}

int cmd_mono(const MonoCmd& c, std::ostream& out, std::ostream& err) {
    try {
        if (c.severities.empty()) throw std::invalid_argument("no severities given");
        for (std::size_t i = 1; i < c.severities.size(); ++i)
            if (!(c.severities[i] > c.severities[i - 1]))
                throw std::invalid_argument("severities must be strictly increasing");
        FusionModel model = load_model(c.model_path);
        CsfParams storage;
        const CsfParams& params = params_for(c.csf_params_path, storage);
        ExtractConfig cfg;
        cfg.tf = model.tf;
        cfg.use_chroma = model.use_chroma;
        cfg.only.insert(model.feature_ids.begin(), model.feature_ids.end());
        YuvReader ref(c.ref_path, c.width, c.height, c.bit_depth);

        std::vector<double> scores;
        for (double sev : c.severities) {
            VideoFeatureExtractor ex(cfg, params);
            std::vector<std::map<std::string, double>> frames;
            for (long t = 0; t < ref.frame_count(); ++t) {
                FramePlanes clean = ref.read_frame(t);
                std::uint64_t frame_seed = c.seed + static_cast<std::uint64_t>(t) * 0x9e3779b97f4a7c15ull;
                frames.push_back(ex.step(clean, distort_frame(clean, c.kind, sev, frame_seed)));
            }
            std::map<std::string, double> pooled = pool_video(frames, model.feature_ids);
            double s = predict_fusion(model, pooled);
            scores.push_back(s);
            out << "severity " << format_g17(sev) << " score " << fmt6(s) << "\n";
        }
        bool monotone = true;
        for (std::size_t i = 1; i < scores.size(); ++i)
            if (scores[i] > scores[i - 1]) monotone = false;
        out << "monotone: " << (monotone ? "yes" : "no") << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "mono: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace funque
