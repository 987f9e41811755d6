#include "funque/eval_select.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "funque/parallel.hpp"
#include "funque/version.hpp"

namespace funque {

namespace {

// Ranks are 1-based; a run of equal values shares the mean of its positions.
std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        double shared = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

SroccResult srocc(const std::vector<double>& pred, const std::vector<double>& mos) {
    if (pred.size() != mos.size()) throw std::invalid_argument("srocc: length mismatch");
    if (pred.size() < 3) throw std::invalid_argument("srocc: need at least 3 samples");
    std::vector<double> rp = average_ranks(pred);
    std::vector<double> rm = average_ranks(mos);
    const double n = static_cast<double>(rp.size());
    double mp = std::accumulate(rp.begin(), rp.end(), 0.0) / n;
    double mm = std::accumulate(rm.begin(), rm.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rp.size(); ++i) {
        double dx = rp[i] - mp, dy = rm[i] - mm;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return {0.0, true};
    return {sxy / std::sqrt(sxx * syy), false};
}

double fisher_mean(const std::vector<double>& rs) {
    if (rs.empty()) throw std::invalid_argument("fisher_mean: empty input");
    const double lim = 1.0 - 1e-7;
    double first = std::clamp(rs[0], -lim, lim);
    bool all_equal = true;
    double zsum = 0.0;
    for (double r : rs) {
        double c = std::clamp(r, -lim, lim);
        if (c != first) all_equal = false;
        zsum += std::atanh(c);
    }
    if (all_equal) return first;  // tanh and atanh cancel analytically; skip the round trip
    return std::tanh(zsum / static_cast<double>(rs.size()));
}

std::size_t DbFeatures::col(const std::string& id) const {
    auto it = std::find(feature_ids.begin(), feature_ids.end(), id);
    if (it == feature_ids.end()) throw std::invalid_argument("feature table '" + name + "': unknown feature id '" + id + "'");
    return static_cast<std::size_t>(it - feature_ids.begin());
}

namespace {

void check_cache_field(const std::string& s, const std::string& what) {
    if (s.find_first_of(",\"\n\r") != std::string::npos)
        throw std::invalid_argument("feature cache: " + what + " contains a delimiter character: '" + s + "'");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_strict_double(const std::string& s, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": not a number: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument(where + ": trailing characters in number: '" + s + "'");
    return v;
}

std::string file_stem(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

}  // namespace

void write_feature_cache(const std::string& path, const DbFeatures& db, const TransformConfig& tf,
                         bool chroma) {
    const std::size_t n = db.rows.size();
    if (db.mos.size() != n || db.ref_paths.size() != n || db.dis_paths.size() != n)
        throw std::invalid_argument("write_feature_cache: inconsistent row counts");
    for (const auto& id : db.feature_ids) check_cache_field(id, "feature id");
    std::ostringstream os;
    os << "ref_path,dis_path,mos";
    for (const auto& id : db.feature_ids) os << ',' << id;
    os << '\n';
    for (std::size_t v = 0; v < n; ++v) {
        if (db.rows[v].size() != db.feature_ids.size())
            throw std::invalid_argument("write_feature_cache: row width mismatch at row " + std::to_string(v));
        check_cache_field(db.ref_paths[v], "ref_path");
        check_cache_field(db.dis_paths[v], "dis_path");
        os << db.ref_paths[v] << ',' << db.dis_paths[v] << ',' << format_g17(db.mos[v]);
        for (double x : db.rows[v]) os << ',' << format_g17(x);
        os << '\n';
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("write_feature_cache: cannot open '" + path + "' for writing");
    f << os.str();
    if (!f) throw std::runtime_error("write_feature_cache: write failed for '" + path + "'");

    std::ofstream meta(path + ".meta", std::ios::binary | std::ios::trunc);
    if (!meta) throw std::runtime_error("write_feature_cache: cannot open '" + path + ".meta' for writing");
    meta << "version=" << kCodeVersion << '\n'
         << "database=" << db.name << '\n'
         << "csf=" << csf_method_name(tf.csf) << '\n'
         << "levels=" << tf.levels << '\n'
         << "sast=" << (tf.use_sast ? 1 : 0) << '\n'
         << "dh_ratio=" << format_g17(tf.dh_ratio) << '\n'
         << "channels=" << (chroma ? "YCbCr" : "Y") << '\n';
    if (!meta) throw std::runtime_error("write_feature_cache: write failed for '" + path + ".meta'");
}

DbFeatures read_feature_cache(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_feature_cache: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("read_feature_cache: '" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> head = split_csv_line(line);
    if (head.size() < 4 || head[0] != "ref_path" || head[1] != "dis_path" || head[2] != "mos")
        throw std::runtime_error("read_feature_cache: '" + path +
                                 "': header must start with 'ref_path,dis_path,mos' and list at least one feature");
    DbFeatures db;
    db.name = file_stem(path);
    db.feature_ids.assign(head.begin() + 3, head.end());
    std::size_t row_no = 1;
    while (std::getline(f, line)) {
        ++row_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != head.size())
            throw std::runtime_error("read_feature_cache: '" + path + "' row " + std::to_string(row_no) + ": expected " +
                                     std::to_string(head.size()) + " cells, got " + std::to_string(cells.size()));
        const std::string where = path + " row " + std::to_string(row_no);
        db.ref_paths.push_back(cells[0]);
        db.dis_paths.push_back(cells[1]);
        db.mos.push_back(parse_strict_double(cells[2], where));
        std::vector<double> row(db.feature_ids.size());
        for (std::size_t k = 0; k < row.size(); ++k) row[k] = parse_strict_double(cells[3 + k], where);
        db.rows.push_back(std::move(row));
    }
    return db;
}

FeatureCacheMeta read_feature_cache_meta(const std::string& cache_path) {
    const std::string path = cache_path + ".meta";
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_feature_cache_meta: cannot open '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("read_feature_cache_meta: '" + path + "': bad line '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto need = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::runtime_error("read_feature_cache_meta: '" + path + "': missing key '" + key + "'");
        return it->second;
    };
    FeatureCacheMeta m;
    m.version = need("version");
    m.database = need("database");
    m.tf.csf = parse_csf_method(need("csf"));
    m.tf.levels = static_cast<int>(parse_strict_double(need("levels"), path));
    m.tf.use_sast = need("sast") == "1";
    m.tf.dh_ratio = parse_strict_double(need("dh_ratio"), path);
    const std::string ch = need("channels");
    if (ch != "Y" && ch != "YCbCr") throw std::runtime_error("read_feature_cache_meta: '" + path + "': bad channels '" + ch + "'");
    m.chroma = ch == "YCbCr";
    m.tf.validate();
    return m;
}

namespace {

std::map<std::string, double> row_map(const DbFeatures& db, std::size_t row,
                                      const std::vector<std::string>& ids) {
    std::map<std::string, double> m;
    for (const auto& id : ids) m[id] = db.rows[row][db.col(id)];
    return m;
}

}  // namespace

CrossDbResult cross_db_srocc(const std::vector<std::string>& feature_ids,
                             const std::vector<DbFeatures>& dbs, const TrainConfig& cfg) {
    if (dbs.size() < 2) throw std::invalid_argument("cross_db_srocc: need at least 2 databases");
    if (feature_ids.empty()) throw std::invalid_argument("cross_db_srocc: empty feature set");
    CrossDbResult out;
    std::vector<std::vector<double>> per_test(dbs.size());
    std::vector<double> all;
    for (std::size_t i = 0; i < dbs.size(); ++i) {
        FusionModel model;
        bool trained = false;
        try {
            std::vector<std::map<std::string, double>> feats;
            feats.reserve(dbs[i].rows.size());
            for (std::size_t v = 0; v < dbs[i].rows.size(); ++v) feats.push_back(row_map(dbs[i], v, feature_ids));
            model = train_fusion(feature_ids, feats, dbs[i].mos, cfg);
            trained = true;
        } catch (const std::exception&) {
            trained = false;
        }
        for (std::size_t j = 0; j < dbs.size(); ++j) {
            if (j == i) continue;  // never test on the training database
            CrossDbEntry e;
            e.train_db = i;
            e.test_db = j;
            if (!trained) {
                e.failed = true;
                out.incomplete = true;
            } else {
                std::vector<double> pred(dbs[j].rows.size());
                for (std::size_t v = 0; v < dbs[j].rows.size(); ++v)
                    pred[v] = predict_fusion(model, row_map(dbs[j], v, feature_ids));
                SroccResult s = srocc(pred, dbs[j].mos);
                e.srocc_value = s.value;
                e.degenerate = s.degenerate;
                per_test[j].push_back(s.value);
                all.push_back(s.value);
            }
            out.entries.push_back(e);
        }
    }
    out.per_test_avg.assign(dbs.size(), 0.0);
    for (std::size_t j = 0; j < dbs.size(); ++j)
        if (!per_test[j].empty()) out.per_test_avg[j] = fisher_mean(per_test[j]);
    out.fisher_overall = all.empty() ? 0.0 : fisher_mean(all);
    return out;
}

std::vector<FeatureBucket> standard_buckets(int levels, bool three_channel) {
    if (levels < 1 || levels > 4) throw std::invalid_argument("standard_buckets: levels must be in 1..4");
    const int L = levels;
    std::vector<Channel> chs = {Channel::Y};
    if (three_channel) {
        chs.push_back(Channel::Cb);
        chs.push_back(Channel::Cr);
    }
    std::vector<FeatureBucket> out;
    for (Channel ch : chs) {
        const std::string prefix = three_channel ? channel_prefix(ch) + "-" : "";
        auto id = [&](const char* base, int lam) { return feature_id(ch, base, lam); };
        auto at_top = [&](const char* base) { return FeatureGroup{{id(base, L)}}; };
        auto all_scales = [&](const char* base) {
            FeatureGroup g;
            for (int l = 1; l <= L; ++l) g.ids.push_back(id(base, l));
            return g;
        };

        FeatureBucket ssim{prefix + "SSIM", {at_top("SSIM"), at_top("ESSIM"), at_top("MS-SSIM"), at_top("MS-ESSIM")}};

        FeatureGroup srred_trred_pairs;
        for (int l = 1; l <= L; ++l) {
            srred_trred_pairs.ids.push_back(id("SRRED-A", l));
            srred_trred_pairs.ids.push_back(id("TRRED-A", l));
        }
        FeatureBucket info{prefix + "Info",
                           {at_top("VIF-HV"), all_scales("VIF-A"), at_top("STRRED-HV"),
                            FeatureGroup{{id("SRRED-HV", L), id("TRRED-HV", L)}}, all_scales("STRRED-A"),
                            srred_trred_pairs}};

        FeatureBucket dlm{prefix + "DLM", {at_top("DLM-S"), all_scales("DLM-S")}};

        FeatureBucket sharp{prefix + "Sharpness",
                            {at_top("Blur"), at_top("Edge"), FeatureGroup{{id("Blur", L), id("Edge", L)}},
                             at_top("dTL-SAI"), at_top("dTL-Blur")}};

        FeatureBucket mad{prefix + "MAD", {at_top("MAD-Ref"), at_top("MAD-Dis"), at_top("MAD")}};

        out.push_back(std::move(ssim));
        out.push_back(std::move(info));
        out.push_back(std::move(dlm));
        out.push_back(std::move(sharp));
        out.push_back(std::move(mad));
    }
    return out;
}

CgfsResult cgfs(const std::vector<FeatureBucket>& buckets, const std::vector<DbFeatures>& dbs,
                const TrainConfig& cfg, int jobs) {
    if (buckets.empty()) throw std::invalid_argument("cgfs: no buckets");
    CgfsResult res;
    std::vector<bool> available(buckets.size(), true);
    std::vector<std::string> selected;
    double best = -1.0;

    for (std::size_t pass = 1;; ++pass) {
        struct Candidate {
            std::size_t bucket;
            const FeatureGroup* group;
            std::vector<std::string> ids;  // selected + group
            double score = 0.0;
        };
        std::vector<Candidate> cands;
        for (std::size_t b = 0; b < buckets.size(); ++b) {
            if (!available[b]) continue;
            for (const FeatureGroup& g : buckets[b].groups) {
                Candidate c;
                c.bucket = b;
                c.group = &g;
                c.ids = selected;
                c.ids.insert(c.ids.end(), g.ids.begin(), g.ids.end());
                cands.push_back(std::move(c));
            }
        }
        if (cands.empty()) break;  // every bucket retired

        // Scores are independent of scan state, so they can be computed in
        // parallel; the strict-improvement scan below stays sequential so
        // tie-breaking matches the bucket-then-group order exactly.
        parallel_for(cands.size(), jobs,
                     [&](std::size_t k) { cands[k].score = cross_db_srocc(cands[k].ids, dbs, cfg).fisher_overall; });

        std::size_t chosen_bucket = buckets.size();
        const Candidate* chosen = nullptr;
        for (const Candidate& c : cands) {
            CgfsEvaluation ev;
            ev.pass = pass;
            ev.bucket = buckets[c.bucket].name;
            ev.group = c.group->ids;
            ev.cross_db = c.score;
            ev.improved = c.score > best;
            if (ev.improved) {
                best = c.score;
                chosen = &c;
                chosen_bucket = c.bucket;
            }
            res.trail.push_back(std::move(ev));
        }
        res.passes = pass;
        if (!chosen) break;  // no candidate beat the running best
        selected = chosen->ids;
        res.chosen_buckets.push_back(buckets[chosen_bucket].name);
        available[chosen_bucket] = false;
    }

    res.selected = std::move(selected);
    res.best = best;
    return res;
}

}  // namespace funque
