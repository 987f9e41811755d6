#include "funque/csf.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "csf_params_default.hpp"

namespace funque {

static constexpr double kPi = 3.14159265358979323846;
// Angular pixel pitch of a 1080-line display viewed from dh_ratio times its
// height, in degrees per (luma) pixel.
static double pixel_step_deg(double dh_ratio) { return (180.0 / kPi) / (dh_ratio * 1080.0); }

CsfKind csf_kind(CsfMethodName m) {
    switch (m) {
        case CsfMethodName::NganSpat:
        case CsfMethodName::NadenauSpat:
            return CsfKind::SpatialFilter;
        default:
            return CsfKind::SubbandWeights;
    }
}

bool csf_color_aware(CsfMethodName m) {
    switch (m) {
        case CsfMethodName::NadenauSpat:
        case CsfMethodName::NadenauSW:
        case CsfMethodName::WatsonSW:
            return true;
        default:
            return false;
    }
}

std::string csf_method_name(CsfMethodName m) {
    switch (m) {
        case CsfMethodName::NganSpat: return "NganSpat";
        case CsfMethodName::LiSW: return "LiSW";
        case CsfMethodName::NadenauSpat: return "NadenauSpat";
        case CsfMethodName::NadenauSW: return "NadenauSW";
        case CsfMethodName::LarsonSW: return "LarsonSW";
        case CsfMethodName::WatsonSW: return "WatsonSW";
        case CsfMethodName::HillSW: return "HillSW";
    }
    throw std::logic_error("csf_method_name: bad enum");
}

CsfMethodName parse_csf_method(const std::string& s) {
    for (CsfMethodName m : {CsfMethodName::NganSpat, CsfMethodName::LiSW, CsfMethodName::NadenauSpat,
                            CsfMethodName::NadenauSW, CsfMethodName::LarsonSW, CsfMethodName::WatsonSW,
                            CsfMethodName::HillSW}) {
        if (csf_method_name(m) == s) return m;
    }
    throw std::runtime_error("unknown CSF method '" + s +
                             "' (expected NganSpat, LiSW, NadenauSpat, NadenauSW, LarsonSW, WatsonSW, HillSW)");
}

static Channel parse_channel_token(const std::string& t) {
    if (t == "y") return Channel::Y;
    if (t == "cb") return Channel::Cb;
    if (t == "cr") return Channel::Cr;
    throw std::runtime_error("csf params: unknown channel token '" + t + "'");
}

CsfParams parse_csf_params(const std::string& text) {
    CsfParams p;
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string directive;
        if (!(ls >> directive)) continue;
        try {
            if (directive == "nadenau") {
                std::string ch;
                double b, c;
                if (!(ls >> ch >> b >> c)) throw std::runtime_error("expected: nadenau <channel> <b> <c>");
                auto& slot = p.nadenau[static_cast<int>(parse_channel_token(ch))];
                slot = {b, c, true};
            } else if (directive == "table") {
                std::string method, ch;
                int level;
                std::array<double, 4> w{};
                if (!(ls >> method >> ch >> level >> w[0] >> w[1] >> w[2] >> w[3]))
                    throw std::runtime_error("expected: table <method> <channel> <level> <A> <H> <V> <D>");
                for (double x : w)
                    if (!(x >= 0) || !std::isfinite(x)) throw std::runtime_error("table weight must be finite and >= 0");
                auto& per_channel = p.tables[method][static_cast<int>(parse_channel_token(ch))];
                if (level != static_cast<int>(per_channel.size()) + 1)
                    throw std::runtime_error("table levels must be contiguous starting at 1");
                per_channel.push_back(w);
            } else {
                throw std::runtime_error("unknown directive '" + directive + "'");
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("csf params line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return p;
}

CsfParams load_csf_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open csf params file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csf_params(ss.str());
}

const CsfParams& default_csf_params() {
    static const CsfParams p = parse_csf_params(kDefaultCsfParamsText);
    return p;
}

double ngan_csf(double f) { return (0.31 + 0.69 * f) * std::exp(-0.29 * f); }

double ngan_spat(double theta_deg) {
    double t2 = theta_deg * theta_deg;
    double den = 0.0841 + 39.4784 * t2;
    return 2.0 * (0.0656 - 23.6910 * t2) / (den * den);
}

SpatialFilter ngan_spatial_filter(double dh_ratio) {
    if (!(dh_ratio > 0)) throw std::runtime_error("ngan_spatial_filter: dh_ratio must be positive");
    // Published design: 21 taps at the nominal 3:1 viewing distance; the first
    // excluded tap is under 5% of the peak. The half-width is kept fixed so the
    // kernel stays a Riemann discretization of the analytic response.
    const int half = 10;
    SpatialFilter f;
    f.sample_step_deg = pixel_step_deg(dh_ratio);
    f.taps.resize(2 * half + 1);
    for (int n = -half; n <= half; ++n)
        f.taps[n + half] = f.sample_step_deg * ngan_spat(n * f.sample_step_deg);
    return f;
}

double nadenau_csf(double f, double b, double c) {
    return (1.0 + 255.0 * std::exp(-b * std::pow(std::abs(f), c))) / 256.0;
}

static const CsfParams::BC& nadenau_bc(Channel ch, const CsfParams& params) {
    const auto& bc = params.nadenau[static_cast<int>(ch)];
    if (!bc.set) throw std::runtime_error("csf params missing 'nadenau' entry for channel " + std::to_string((int)ch));
    return bc;
}

SpatialFilter nadenau_spatial_filter(Channel ch, double dh_ratio, const CsfParams& params) {
    if (!(dh_ratio > 0)) throw std::runtime_error("nadenau_spatial_filter: dh_ratio must be positive");
    const auto& bc = nadenau_bc(ch, params);
    // 4:2:0 chroma samples subtend twice the visual angle of luma samples.
    double step = pixel_step_deg(dh_ratio) * (ch == Channel::Y ? 1.0 : 2.0);

    // Sample the frequency response on an N-point DFT grid and invert with a
    // direct O(N^2) real transform; the response is even, so the result is a
    // real symmetric kernel. N=1024 is far finer than the few-tap outcome needs.
    const int N = 1024;
    std::vector<double> H(N);
    double nyq = 0.5 / step;
    for (int k = 0; k < N; ++k) {
        double f = static_cast<double>(k) / (N * step);
        if (f > nyq) f -= 2.0 * nyq;  // second half holds negative frequencies
        H[k] = nadenau_csf(f, bc.b, bc.c);
    }
    std::vector<double> h(N);
    for (int n = 0; n < N; ++n) {
        double acc = 0.0;
        for (int k = 0; k < N; ++k) acc += H[k] * std::cos(2.0 * kPi * k * n / N);
        h[n] = acc / N;
    }
    // h[0] is the center tap; h[n] the tap n samples away. Keep taps while they
    // stay at or above 5% of the center magnitude.
    int half = 0;
    for (int n = 1; n < N / 2; ++n) {
        if (std::abs(h[n]) >= 0.05 * std::abs(h[0]))
            half = n;
        else
            break;
    }
    SpatialFilter f;
    f.sample_step_deg = step;
    f.taps.resize(2 * half + 1);
    for (int n = -half; n <= half; ++n) f.taps[n + half] = h[std::abs(n)];
    // The model's DC response is exactly 1; restore it after truncation.
    double sum = 0.0;
    for (double t : f.taps) sum += t;
    for (double& t : f.taps) t /= sum;
    return f;
}

double nominal_frequency(int level, Subband th, double dh_ratio) {
    if (level < 1) throw std::runtime_error("nominal_frequency: level must be >= 1");
    if (th == Subband::A) throw std::runtime_error("nominal_frequency: defined for detail subbands only");
    double p = (th == Subband::D) ? -1.0 : 1.0;
    return 1080.0 * kPi * dh_ratio / (std::pow(2.0, level) * 180.0 * (0.15 * p + 0.85));
}

double larson_csf(double f_r) {
    if (f_r < 4.0) return 0.981;
    return (0.0499 + 0.5928 * f_r) * std::exp(-std::pow(0.228 * f_r, 1.1));
}

// Shared shape for the closed-form weight builders: A band passes unweighted.
template <typename F>
static SubbandWeights closed_form_weights(int levels, F&& weight_of) {
    if (levels < 1) throw std::runtime_error("subband weights: levels must be >= 1");
    SubbandWeights sw;
    sw.levels = levels;
    sw.w.resize(levels);
    for (int lam = 1; lam <= levels; ++lam) {
        sw.w[lam - 1][static_cast<int>(Subband::A)] = 1.0;
        for (Subband th : {Subband::H, Subband::V, Subband::D})
            sw.w[lam - 1][static_cast<int>(th)] = weight_of(lam, th);
    }
    return sw;
}

SubbandWeights li_subband_weights(int levels, double dh_ratio) {
    return closed_form_weights(levels, [&](int lam, Subband th) { return ngan_csf(nominal_frequency(lam, th, dh_ratio)); });
}

SubbandWeights nadenau_subband_weights(Channel ch, int levels, double dh_ratio, const CsfParams& params) {
    const auto& bc = nadenau_bc(ch, params);
    return closed_form_weights(
        levels, [&](int lam, Subband th) { return nadenau_csf(nominal_frequency(lam, th, dh_ratio), bc.b, bc.c); });
}

SubbandWeights larson_subband_weights(int levels, double dh_ratio) {
    return closed_form_weights(levels, [&](int lam, Subband th) { return larson_csf(nominal_frequency(lam, th, dh_ratio)); });
}

SubbandWeights table_subband_weights(CsfMethodName m, Channel ch, int levels, const CsfParams& params) {
    std::string key;
    if (m == CsfMethodName::WatsonSW)
        key = "watson";
    else if (m == CsfMethodName::HillSW)
        key = "hill";
    else
        throw std::runtime_error("table_subband_weights: " + csf_method_name(m) + " is not a table method");
    if (!csf_color_aware(m)) ch = Channel::Y;
    auto it = params.tables.find(key);
    if (it == params.tables.end()) throw std::runtime_error("csf params: no '" + key + "' table configured");
    const auto& tab = it->second[static_cast<int>(ch)];
    if (static_cast<int>(tab.size()) < levels)
        throw std::runtime_error("csf params: '" + key + "' table depth " + std::to_string(tab.size()) +
                                 " < requested level " + std::to_string(levels));
    SubbandWeights sw;
    sw.levels = levels;
    sw.w.assign(tab.begin(), tab.begin() + levels);
    return sw;
}

CsfRealization realize_csf(CsfMethodName m, Channel ch, int levels, double dh_ratio, const CsfParams& params) {
    // Color-unaware methods use the luma response for every channel.
    if (!csf_color_aware(m)) ch = Channel::Y;
    CsfRealization r;
    r.kind = csf_kind(m);
    switch (m) {
        case CsfMethodName::NganSpat: r.filter = ngan_spatial_filter(dh_ratio); break;
        case CsfMethodName::NadenauSpat: r.filter = nadenau_spatial_filter(ch, dh_ratio, params); break;
        case CsfMethodName::LiSW: r.weights = li_subband_weights(levels, dh_ratio); break;
        case CsfMethodName::NadenauSW: r.weights = nadenau_subband_weights(ch, levels, dh_ratio, params); break;
        case CsfMethodName::LarsonSW: r.weights = larson_subband_weights(levels, dh_ratio); break;
        case CsfMethodName::WatsonSW:
        case CsfMethodName::HillSW: r.weights = table_subband_weights(m, ch, levels, params); break;
    }
    return r;
}

}  // namespace funque
