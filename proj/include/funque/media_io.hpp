#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "funque/image.hpp"

namespace funque {

// Geometry and sample format of one raw planar 4:2:0 video file.
struct VideoSpec {
    int width = 0;
    int height = 0;
    int bit_depth = 8;  // 8 or 10 (10-bit stored as 16-bit little-endian words)
    long frame_count = 0;

    void validate() const;
    // Bytes of one frame: Y (h*w) + Cb + Cr (quarter size each), 1 or 2 bytes/sample.
    long frame_size_bytes() const;
};

// One decoded frame; all planes normalized to the shared [0,255] sample scale
// (10-bit samples are divided by 4 so both depths use one set of constants).
struct FramePlanes {
    Plane y, cb, cr;
};

// Streaming reader: seeks and decodes one frame at a time; the file is never
// resident in memory. frame_count is derived from the file size, which must be
// an exact multiple of the frame size.
class YuvReader {
  public:
    YuvReader(std::string path, int width, int height, int bit_depth);

    const VideoSpec& spec() const { return spec_; }
    long frame_count() const { return spec_.frame_count; }
    FramePlanes read_frame(long index) const;

  private:
    std::string path_;
    VideoSpec spec_;
};

struct ManifestRow {
    std::string ref_path;
    std::string dis_path;
    VideoSpec spec;  // frame_count filled in lazily by the reader
    double mos = 0.0;
};

struct DatasetManifest {
    std::string name;
    std::vector<ManifestRow> rows;
};

// CSV with header `ref_path,dis_path,width,height,bit_depth,mos`; lines starting
// with '#' are comments. Relative video paths are resolved against the CSV's
// directory. Malformed rows raise with the offending row number.
DatasetManifest load_manifest(const std::string& path);

// Inverse of read_frame's normalization: write planes back to raw bytes.
// Used by tests and the synthetic-clip generators.
void write_yuv_frame(const std::string& path, const FramePlanes& f, int bit_depth, bool append);

}  // namespace funque
