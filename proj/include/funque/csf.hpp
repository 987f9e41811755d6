#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace funque {

enum class Channel { Y = 0, Cb = 1, Cr = 2 };
enum class Subband { A = 0, H = 1, V = 2, D = 3 };

enum class CsfMethodName { NganSpat, LiSW, NadenauSpat, NadenauSW, LarsonSW, WatsonSW, HillSW };
enum class CsfKind { SpatialFilter, SubbandWeights };

CsfKind csf_kind(CsfMethodName m);
bool csf_color_aware(CsfMethodName m);
std::string csf_method_name(CsfMethodName m);
CsfMethodName parse_csf_method(const std::string& s);  // case-sensitive canonical names

// Odd-length symmetric 1-D kernel applied separably to pixel planes.
struct SpatialFilter {
    std::vector<double> taps;    // full kernel, center at taps.size()/2
    double sample_step_deg = 0;  // degrees of visual angle per sample
};

// Per-(level, subband) multipliers for wavelet-domain CSF weighting.
struct SubbandWeights {
    int levels = 0;
    std::vector<std::array<double, 4>> w;  // w[level-1][subband], order A,H,V,D

    double at(int level, Subband th) const { return w[level - 1][static_cast<int>(th)]; }
};

// Numeric parameters that the source models publish only in their own papers:
// Nadenau's per-channel (b, c) and the Watson/Hill weight tables.
struct CsfParams {
    struct BC {
        double b = 0, c = 0;
        bool set = false;
    };
    std::array<BC, 3> nadenau;  // by Channel
    // tables[method][channel][level-1][subband]; level depth may differ per channel
    std::map<std::string, std::array<std::vector<std::array<double, 4>>, 3>> tables;
};

// Parses the bundled grammar (see data/csf_params.conf). Unknown directives fail.
CsfParams parse_csf_params(const std::string& text);
CsfParams load_csf_params_file(const std::string& path);
// Compiled-in copy of the bundled config.
const CsfParams& default_csf_params();

// Band-pass CSF of Ngan et al., (0.31 + 0.69 f) e^{-0.29 f}, f in cycles/degree.
double ngan_csf(double f);
// Its analytic inverse Fourier transform, evaluated at theta degrees.
double ngan_spat(double theta_deg);
// 21-tap discretization at a 1080-line display viewed at dh_ratio * height.
SpatialFilter ngan_spatial_filter(double dh_ratio);

// Low-pass CSF of Nadenau et al., (1 + 255 e^{-b f^c})/256.
double nadenau_csf(double f, double b, double c);
// Inverse-DFT design on the channel's own sampling grid, truncated to taps
// >= 5% of the center tap and renormalized to unit sum.
SpatialFilter nadenau_spatial_filter(Channel ch, double dh_ratio, const CsfParams& params);

// Nominal frequency of a detail subband; the orientation factor encodes the
// oblique effect (diagonal bands map to higher frequencies).
double nominal_frequency(int level, Subband th, double dh_ratio);

// Larson's piecewise CSF along the zero-angle axis (0.981 below 4 cpd).
double larson_csf(double f_r);

SubbandWeights li_subband_weights(int levels, double dh_ratio);
SubbandWeights nadenau_subband_weights(Channel ch, int levels, double dh_ratio, const CsfParams& params);
SubbandWeights larson_subband_weights(int levels, double dh_ratio);
SubbandWeights table_subband_weights(CsfMethodName m, Channel ch, int levels, const CsfParams& params);

// One method realized for one channel: exactly one of filter/weights is active.
struct CsfRealization {
    CsfKind kind;
    SpatialFilter filter;
    SubbandWeights weights;
};
CsfRealization realize_csf(CsfMethodName m, Channel ch, int levels, double dh_ratio, const CsfParams& params);

}  // namespace funque
