#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "funque/fusion.hpp"

namespace funque {

// Rank-correlation evaluation across databases and the bucket-constrained
// greedy feature selection used to pick model feature sets.

struct SroccResult {
    double value = 0.0;
    bool degenerate = false;  // a constant input makes the rank correlation undefined; scored 0
};

// Spearman rank-order correlation: Pearson correlation of average ranks
// (ties share the mean of the rank positions they occupy). Lengths must be
// equal and at least 3.
SroccResult srocc(const std::vector<double>& pred, const std::vector<double>& mos);

// tanh(mean(atanh(r))) with each r clamped to |r| <= 1 - 1e-7. When all
// (clamped) inputs are equal the common value is returned directly, keeping
// the mathematical identity fisher_mean({r, ..., r}) == r exact in floating
// point. Empty input is an error.
double fisher_mean(const std::vector<double>& rs);

// Per-video feature rows plus subjective scores for one database.
struct DbFeatures {
    std::string name;
    std::vector<std::string> feature_ids;
    std::vector<std::string> ref_paths;  // parallel to rows
    std::vector<std::string> dis_paths;
    std::vector<std::vector<double>> rows;  // [video][feature]
    std::vector<double> mos;

    std::size_t col(const std::string& id) const;  // throws on unknown id
};

// Feature cache: one CSV per (database, transform config) with header
// "ref_path,dis_path,mos,<feature ids...>", one row per video in manifest
// order, numbers rendered with 17 significant digits. A "<path>.meta"
// sidecar records the transform configuration and code version so stale
// caches are detectable. Paths containing ',', '"' or newlines are rejected.
struct FeatureCacheMeta {
    std::string version;
    std::string database;
    TransformConfig tf;
    bool chroma = false;
};

void write_feature_cache(const std::string& path, const DbFeatures& db, const TransformConfig& tf,
                         bool chroma);
DbFeatures read_feature_cache(const std::string& path);
FeatureCacheMeta read_feature_cache_meta(const std::string& cache_path);

struct CrossDbEntry {
    std::size_t train_db = 0, test_db = 0;
    double srocc_value = 0.0;
    bool failed = false;      // training failed; excluded from every average
    bool degenerate = false;  // constant predictions on the test database
};

// Every ordered (train, test) pair with train != test.
struct CrossDbResult {
    std::vector<CrossDbEntry> entries;
    std::vector<double> per_test_avg;  // Fisher mean of each test column (0 if empty)
    double fisher_overall = 0.0;
    bool incomplete = false;
};

CrossDbResult cross_db_srocc(const std::vector<std::string>& feature_ids,
                             const std::vector<DbFeatures>& dbs, const TrainConfig& cfg);

// A group's features enter or leave a candidate set together; a bucket
// contributes at most one group to the final selection.
struct FeatureGroup {
    std::vector<std::string> ids;
};

struct FeatureBucket {
    std::string name;
    std::vector<FeatureGroup> groups;
};

// The five standard buckets (SSIM / Info / DLM / Sharpness / MAD) at wavelet
// level `levels`; with three_channel, one copy per channel — Y, Cb, Cr — for
// fifteen buckets, ids carrying the channel prefix.
std::vector<FeatureBucket> standard_buckets(int levels, bool three_channel);

struct CgfsEvaluation {
    std::size_t pass = 0;  // 1-based full-scan number
    std::string bucket;
    std::vector<std::string> group;
    double cross_db = 0.0;
    bool improved = false;  // strictly beat the running best when scanned
};

struct CgfsResult {
    std::vector<std::string> selected;        // union of chosen groups, in selection order
    std::vector<std::string> chosen_buckets;  // bucket names in selection order
    double best = -1.0;
    std::size_t passes = 0;
    std::vector<CgfsEvaluation> trail;  // every candidate evaluation, scan order
};

// Greedy forward selection over buckets: each pass scans every group of every
// still-available bucket (bucket order, then group order), adopts the
// candidate whose cross-database SROCC strictly beats the best seen so far
// (ties keep the earlier-scanned group), retires the winning bucket, and
// stops when a full scan brings no improvement. Candidate evaluations within
// a pass are independent and run on up to `jobs` threads.
CgfsResult cgfs(const std::vector<FeatureBucket>& buckets, const std::vector<DbFeatures>& dbs,
                const TrainConfig& cfg, int jobs = 1);

}  // namespace funque
