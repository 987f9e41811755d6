#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "funque/distortion.hpp"
#include "funque/eval_select.hpp"

namespace funque {

// Command drivers shared by the executable and the test suites. Every driver
// writes results to `out`, diagnostics to `err`, and returns a process exit
// code: 0 success, 1 partial failure, 2 usage/configuration error.

struct ExtractCmd {
    std::string manifest_path;
    std::string out_csv;
    TransformConfig tf;
    bool use_chroma = false;
    int jobs = 1;
    std::string csf_params_path;  // empty: compiled-in defaults
};
// Extracts every candidate feature for each manifest row into a feature
// cache. Unreadable rows are reported and skipped; the run continues and
// exits 1. Row order in the cache equals manifest order regardless of --jobs.
int cmd_extract(const ExtractCmd& c, std::ostream& out, std::ostream& err);

struct ScoreCmd {
    std::string model_path, ref_path, dis_path;
    int width = 0, height = 0, bit_depth = 8;
    bool per_frame = false;
    std::string csf_params_path;
};
// Scores one pair under a trained model; the model's embedded transform
// configuration governs extraction. The last stdout line is the score with
// six decimals.
int cmd_score(const ScoreCmd& c, std::ostream& out, std::ostream& err);

struct TrainCmd {
    std::vector<std::string> cache_paths;
    std::string out_model;
    std::string preset;                 // preset name, or empty with explicit features
    std::vector<std::string> features;  // explicit ids; ignored when preset is set
    TrainConfig train;
};
int cmd_train(const TrainCmd& c, std::ostream& out, std::ostream& err);

struct SelectCmd {
    std::vector<std::string> cache_paths;  // one cache per database, same transform config
    std::string out_report;                // audit-trail CSV; empty: stdout summary only
    TrainConfig train;
    int jobs = 1;
};
int cmd_select(const SelectCmd& c, std::ostream& out, std::ostream& err);

struct EvalCmd {
    std::vector<std::string> cache_paths;
    std::vector<std::string> features;
    std::string preset;      // alternative to an explicit feature list
    std::string out_report;  // matrix CSV; empty: stdout summary only
    TrainConfig train;
};
int cmd_eval(const EvalCmd& c, std::ostream& out, std::ostream& err);

struct MonoCmd {
    std::string model_path, ref_path;
    int width = 0, height = 0, bit_depth = 8;
    DistortionKind kind = DistortionKind::GaussianNoise;
    std::vector<double> severities;  // strictly increasing
    std::uint64_t seed = 0x5eed;
    std::string csf_params_path;
};
// Applies the distortion to the reference at each severity, scores each
// version against the clean reference, and reports whether the score
// sequence is monotone nonincreasing.
int cmd_mono(const MonoCmd& c, std::ostream& out, std::ostream& err);

}  // namespace funque
