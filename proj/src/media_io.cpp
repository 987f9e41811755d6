#include "funque/media_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/stat.h>

namespace funque {

void VideoSpec::validate() const {
    if (width <= 0 || height <= 0)
        throw std::runtime_error("VideoSpec: non-positive dimensions");
    if (width % 2 != 0 || height % 2 != 0)
        throw std::runtime_error("VideoSpec: width and height must be even for 4:2:0");
    if (bit_depth != 8 && bit_depth != 10)
        throw std::runtime_error("VideoSpec: bit depth must be 8 or 10, got " + std::to_string(bit_depth));
}

long VideoSpec::frame_size_bytes() const {
    long samples = static_cast<long>(width) * height * 3 / 2;
    return samples * (bit_depth == 8 ? 1 : 2);
}

static long file_size_bytes(const std::string& path) {
    struct stat st{};
    if (stat(path.c_str(), &st) != 0)
        throw std::runtime_error("cannot stat video file: " + path);
    return static_cast<long>(st.st_size);
}

YuvReader::YuvReader(std::string path, int width, int height, int bit_depth) : path_(std::move(path)) {
    spec_.width = width;
    spec_.height = height;
    spec_.bit_depth = bit_depth;
    spec_.validate();
    long bytes = file_size_bytes(path_);
    long fsz = spec_.frame_size_bytes();
    if (bytes == 0 || bytes % fsz != 0)
        throw std::runtime_error("video file size " + std::to_string(bytes) + " is not a multiple of the frame size " +
                                 std::to_string(fsz) + ": " + path_);
    spec_.frame_count = bytes / fsz;
}

// Reads one plane's worth of samples at the current stream position.
static void read_plane(std::ifstream& in, Plane& p, int h, int w, int bit_depth, const std::string& path) {
    p = Plane(h, w);
    size_t n = static_cast<size_t>(h) * w;
    if (bit_depth == 8) {
        std::vector<uint8_t> buf(n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
        if (!in)
            throw std::runtime_error("truncated video file at byte offset " + std::to_string((long)in.tellg()) + ": " + path);
        for (size_t i = 0; i < n; ++i) p.v[i] = static_cast<double>(buf[i]);
    } else {
        std::vector<uint8_t> buf(2 * n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(2 * n));
        if (!in)
            throw std::runtime_error("truncated video file at byte offset " + std::to_string((long)in.tellg()) + ": " + path);
        for (size_t i = 0; i < n; ++i) {
            unsigned word = buf[2 * i] | (static_cast<unsigned>(buf[2 * i + 1]) << 8);
            if (word > 1023)
                throw std::runtime_error("10-bit sample out of range (" + std::to_string(word) + " > 1023) in " + path);
            p.v[i] = static_cast<double>(word) / 4.0;
        }
    }
}

FramePlanes YuvReader::read_frame(long index) const {
    if (index < 0 || index >= spec_.frame_count)
        throw std::runtime_error("frame index " + std::to_string(index) + " out of range [0," +
                                 std::to_string(spec_.frame_count) + ") in " + path_);
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open video file: " + path_);
    in.seekg(static_cast<std::streamoff>(index) * spec_.frame_size_bytes());
    FramePlanes f;
    read_plane(in, f.y, spec_.height, spec_.width, spec_.bit_depth, path_);
    read_plane(in, f.cb, spec_.height / 2, spec_.width / 2, spec_.bit_depth, path_);
    read_plane(in, f.cr, spec_.height / 2, spec_.width / 2, spec_.bit_depth, path_);
    return f;
}

static std::string dirname_of(const std::string& path) {
    auto pos = path.find_last_of('/');
    return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

static std::string resolve_path(const std::string& base_dir, const std::string& p) {
    if (p.empty() || p.front() == '/') return p;
    return base_dir + "/" + p;
}

static std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    std::string base = dirname_of(path);

    DatasetManifest m;
    // Database name: file stem.
    {
        auto slash = path.find_last_of('/');
        std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
        auto dot = stem.find_last_of('.');
        m.name = dot == std::string::npos ? stem : stem.substr(0, dot);
    }

    std::string line;
    bool header_seen = false;
    long row_no = 0;  // physical line number, so errors point at the file as an editor shows it
    const std::string expected = "ref_path,dis_path,width,height,bit_depth,mos";
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            std::string got = line;
            if (!got.empty() && got.back() == '\r') got.pop_back();
            if (got != expected)
                throw std::runtime_error("manifest header mismatch in " + path + ": expected '" + expected + "'");
            header_seen = true;
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != 6)
            throw std::runtime_error("manifest row " + std::to_string(row_no) + ": expected 6 columns, got " +
                                     std::to_string(fields.size()));
        ManifestRow r;
        r.ref_path = resolve_path(base, fields[0]);
        r.dis_path = resolve_path(base, fields[1]);
        try {
            r.spec.width = std::stoi(fields[2]);
            r.spec.height = std::stoi(fields[3]);
            r.spec.bit_depth = std::stoi(fields[4]);
            size_t pos = 0;
            r.mos = std::stod(fields[5], &pos);
            if (pos != fields[5].size() || !std::isfinite(r.mos)) throw std::invalid_argument("mos");
        } catch (const std::exception&) {
            throw std::runtime_error("manifest row " + std::to_string(row_no) + ": non-numeric field in '" + line + "'");
        }
        r.spec.validate();
        for (const std::string* p : {&r.ref_path, &r.dis_path}) {
            struct stat st{};
            if (stat(p->c_str(), &st) != 0)
                throw std::runtime_error("manifest row " + std::to_string(row_no) + ": file not found: " + *p);
        }
        m.rows.push_back(std::move(r));
    }
    if (!header_seen) throw std::runtime_error("manifest has no header: " + path);
    return m;
}

static void write_plane(std::ofstream& out, const Plane& p, int bit_depth) {
    if (bit_depth == 8) {
        std::vector<uint8_t> buf(p.size());
        for (size_t i = 0; i < p.size(); ++i) {
            double x = std::lround(p.v[i]);
            buf[i] = static_cast<uint8_t>(x < 0 ? 0 : (x > 255 ? 255 : x));
        }
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    } else {
        std::vector<uint8_t> buf(2 * p.size());
        for (size_t i = 0; i < p.size(); ++i) {
            double x = std::lround(p.v[i] * 4.0);
            unsigned word = static_cast<unsigned>(x < 0 ? 0 : (x > 1023 ? 1023 : x));
            buf[2 * i] = static_cast<uint8_t>(word & 0xff);
            buf[2 * i + 1] = static_cast<uint8_t>(word >> 8);
        }
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    }
}

void write_yuv_frame(const std::string& path, const FramePlanes& f, int bit_depth, bool append) {
    std::ofstream out(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_plane(out, f.y, bit_depth);
    write_plane(out, f.cb, bit_depth);
    write_plane(out, f.cr, bit_depth);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace funque
