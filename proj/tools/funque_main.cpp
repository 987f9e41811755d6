#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "funque/cli.hpp"
#include "funque/feature_set.hpp"
#include "funque/version.hpp"

namespace {

// Shared transform flags; --preset is mutually exclusive with the explicit
// knobs and resolves to a preset's transform configuration.
struct TransformFlags {
    std::string preset;
    std::string csf = "NadenauSW";
    int levels = 2;
    bool sast = true;
    double dh_ratio = 3.0;
    std::string channels = "Y";
};

void add_transform_flags(CLI::App* app, TransformFlags& t) {
    auto* preset = app->add_option("--preset", t.preset, "model preset name (sets csf/levels/sast/channels)");
    auto* csf = app->add_option("--csf", t.csf, "CSF method: NganSpat|LiSW|NadenauSpat|NadenauSW|LarsonSW|WatsonSW|HillSW");
    auto* levels = app->add_option("--levels", t.levels, "wavelet decomposition levels (1..4)");
    auto* sast = app->add_flag("--sast,!--no-sast", t.sast, "enable/disable viewing-distance downscale");
    auto* dh = app->add_option("--dh-ratio", t.dh_ratio, "viewing distance in display heights (default 3.0)");
    auto* ch = app->add_option("--channels", t.channels, "Y or YCbCr");
    preset->excludes(csf)->excludes(levels)->excludes(sast)->excludes(dh)->excludes(ch);
}

// Returns nonzero exit code on bad flags.
int resolve_transform(const TransformFlags& t, funque::TransformConfig& tf, bool& chroma) {
    try {
        if (!t.preset.empty()) {
            const funque::ModelPreset& p = funque::preset_by_name(t.preset);
            tf.csf = p.csf;
            tf.levels = p.levels;
            tf.use_sast = p.use_sast;
            tf.dh_ratio = 3.0;
            chroma = p.use_chroma;
        } else {
            tf.csf = funque::parse_csf_method(t.csf);
            tf.levels = t.levels;
            tf.use_sast = t.sast;
            tf.dh_ratio = t.dh_ratio;
            if (t.channels == "Y")
                chroma = false;
            else if (t.channels == "YCbCr")
                chroma = true;
            else
                throw std::invalid_argument("--channels must be Y or YCbCr");
        }
        tf.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

funque::TrainConfig train_flags(const std::string& regressor) {
    funque::TrainConfig tc;
    if (regressor == "svr")
        tc.kind = funque::TrainConfig::Kind::Svr;
    else if (regressor == "linear")
        tc.kind = funque::TrainConfig::Kind::Linear;
    else
        throw std::invalid_argument("--regressor must be linear or svr");
    return tc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavelet-domain full-reference video quality toolkit"};
    app.set_version_flag("--version", funque::kCodeVersion);
    app.require_subcommand(1);

    // extract
    auto* ext = app.add_subcommand("extract", "extract all candidate features for a manifest into a cache CSV");
    funque::ExtractCmd ec;
    TransformFlags ext_tf;
    ext->add_option("--manifest", ec.manifest_path, "dataset manifest CSV")->required();
    ext->add_option("--out", ec.out_csv, "output feature cache CSV")->required();
    ext->add_option("--jobs", ec.jobs, "worker threads (default 1)");
    ext->add_option("--config", ec.csf_params_path, "CSF weight/parameter file (default: built-in)");
    add_transform_flags(ext, ext_tf);

    // score
    auto* sc = app.add_subcommand("score", "score one ref/dis pair with a trained model");
    funque::ScoreCmd scc;
    sc->add_option("--model", scc.model_path, "model JSON file")->required();
    sc->add_option("--ref", scc.ref_path, "reference YUV420 file")->required();
    sc->add_option("--dis", scc.dis_path, "distorted YUV420 file")->required();
    sc->add_option("--width", scc.width, "frame width")->required();
    sc->add_option("--height", scc.height, "frame height")->required();
    sc->add_option("--bit-depth", scc.bit_depth, "8 or 10 (default 8)");
    sc->add_flag("--per-frame", scc.per_frame, "print the per-frame feature table");
    sc->add_option("--config", scc.csf_params_path, "CSF weight/parameter file (default: built-in)");

    // train
    auto* tr = app.add_subcommand("train", "fit a fusion model from feature caches");
    funque::TrainCmd trc;
    std::string tr_regressor = "linear";
    tr->add_option("--cache", trc.cache_paths, "feature cache CSV(s)")->required()->expected(-1);
    tr->add_option("--out", trc.out_model, "output model JSON")->required();
    tr->add_option("--preset", trc.preset, "train a named preset's feature set");
    tr->add_option("--features", trc.features, "explicit feature ids")->expected(-1);
    tr->add_option("--regressor", tr_regressor, "linear or svr (default linear)");

    // select
    auto* se = app.add_subcommand("select", "greedy bucket-constrained feature selection across caches");
    funque::SelectCmd sec;
    std::string se_regressor = "linear";
    se->add_option("--cache", sec.cache_paths, "feature cache CSVs, one per database")->required()->expected(-1);
    se->add_option("--out", sec.out_report, "audit trail CSV");
    se->add_option("--regressor", se_regressor, "linear or svr (default linear)");
    se->add_option("--jobs", sec.jobs, "worker threads (default 1)");

    // eval
    auto* ev = app.add_subcommand("eval", "cross-database evaluation of a feature set");
    funque::EvalCmd evc;
    std::string ev_regressor = "linear";
    ev->add_option("--cache", evc.cache_paths, "feature cache CSVs, one per database")->required()->expected(-1);
    ev->add_option("--features", evc.features, "feature ids to evaluate")->expected(-1);
    ev->add_option("--preset", evc.preset, "evaluate a named preset's feature set");
    ev->add_option("--out", evc.out_report, "matrix report CSV");
    ev->add_option("--regressor", ev_regressor, "linear or svr (default linear)");

    // mono
    auto* mo = app.add_subcommand("mono", "monotonicity report for a synthetic distortion ladder");
    funque::MonoCmd moc;
    std::string mo_dist = "gaussian_noise";
    mo->add_option("--model", moc.model_path, "model JSON file")->required();
    mo->add_option("--ref", moc.ref_path, "reference YUV420 file")->required();
    mo->add_option("--width", moc.width, "frame width")->required();
    mo->add_option("--height", moc.height, "frame height")->required();
    mo->add_option("--bit-depth", moc.bit_depth, "8 or 10 (default 8)");
    mo->add_option("--distortion", mo_dist, "gaussian_noise|gaussian_blur|uniform_quantize");
    mo->add_option("--severities", moc.severities, "strictly increasing severity values")->required()->expected(-1);
    mo->add_option("--seed", moc.seed, "noise seed (default 0x5eed)");
    mo->add_option("--config", moc.csf_params_path, "CSF weight/parameter file (default: built-in)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ext->parsed()) {
            if (int rc = resolve_transform(ext_tf, ec.tf, ec.use_chroma)) return rc;
            return funque::cmd_extract(ec, std::cout, std::cerr);
        }
        if (sc->parsed()) return funque::cmd_score(scc, std::cout, std::cerr);
        if (tr->parsed()) {
            trc.train = train_flags(tr_regressor);
            return funque::cmd_train(trc, std::cout, std::cerr);
        }
        if (se->parsed()) {
            sec.train = train_flags(se_regressor);
            return funque::cmd_select(sec, std::cout, std::cerr);
        }
        if (ev->parsed()) {
            evc.train = train_flags(ev_regressor);
            return funque::cmd_eval(evc, std::cout, std::cerr);
        }
        if (mo->parsed()) {
            moc.kind = funque::parse_distortion(mo_dist);
            return funque::cmd_mono(moc, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "error: no command\n";
    return 2;
}
