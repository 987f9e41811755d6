#include <cstdint>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "funque/media_io.hpp"
#include "helpers.hpp"

using namespace funque;

namespace {

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("VideoSpec validation and frame size") {
    VideoSpec s{64, 32, 8, 0};
    s.validate();
    CHECK(s.frame_size_bytes() == 64 * 32 + 2 * (32 * 16));

    VideoSpec odd{63, 32, 8, 0};
    CHECK_THROWS(odd.validate());
    VideoSpec odd_h{64, 30 + 1, 8, 0};
    CHECK_THROWS(odd_h.validate());
    VideoSpec depth{64, 32, 9, 0};
    CHECK_THROWS(depth.validate());

    VideoSpec ten{64, 32, 10, 0};
    ten.validate();
    CHECK(ten.frame_size_bytes() == 2 * (64 * 32 + 2 * (32 * 16)));
}

TEST_CASE("YuvReader decodes 8-bit planes at the right offsets") {
    const std::string dir = testutil::temp_dir("media_io");
    const std::string path = dir + "/tiny8.yuv";
    // 4x2 frame: Y is 8 bytes, Cb and Cr 2 bytes each; two frames back to back.
    std::vector<std::uint8_t> bytes;
    for (int v = 0; v < 12; ++v) bytes.push_back(static_cast<std::uint8_t>(v * 10));
    for (int v = 0; v < 12; ++v) bytes.push_back(static_cast<std::uint8_t>(255 - v));
    write_bytes(path, bytes);

    YuvReader r(path, 4, 2, 8);
    CHECK(r.frame_count() == 2);
    FramePlanes f0 = r.read_frame(0);
    CHECK(f0.y.h == 2);
    CHECK(f0.y.w == 4);
    CHECK(f0.cb.h == 1);
    CHECK(f0.cb.w == 2);
    CHECK(f0.y.at(0, 0) == 0.0);
    CHECK(f0.y.at(1, 3) == 70.0);
    CHECK(f0.cb.at(0, 0) == 80.0);
    CHECK(f0.cb.at(0, 1) == 90.0);
    CHECK(f0.cr.at(0, 0) == 100.0);
    CHECK(f0.cr.at(0, 1) == 110.0);
    FramePlanes f1 = r.read_frame(1);
    CHECK(f1.y.at(0, 0) == 255.0);
    CHECK(f1.cr.at(0, 1) == 244.0);

    // Reading twice gives identical values.
    FramePlanes again = r.read_frame(0);
    CHECK(testutil::max_abs_diff(f0.y, again.y) == 0.0);
}

TEST_CASE("YuvReader 10-bit normalization and range checks") {
    const std::string dir = testutil::temp_dir("media_io");
    const std::string path = dir + "/tiny10.yuv";
    auto push_word = [](std::vector<std::uint8_t>& b, std::uint16_t w) {
        b.push_back(static_cast<std::uint8_t>(w & 0xff));
        b.push_back(static_cast<std::uint8_t>(w >> 8));
    };
    std::vector<std::uint8_t> bytes;
    std::uint16_t words[12] = {0, 4, 1020, 1023, 512, 2, 100, 200, 300, 400, 500, 600};
    for (std::uint16_t w : words) push_word(bytes, w);
    write_bytes(path, bytes);

    YuvReader r(path, 4, 2, 10);
    FramePlanes f = r.read_frame(0);
    CHECK(f.y.at(0, 0) == 0.0);
    CHECK(f.y.at(0, 1) == 1.0);    // 4/4
    CHECK(f.y.at(0, 2) == 255.0);  // 1020/4
    CHECK(f.y.at(0, 3) == doctest::Approx(255.75));
    CHECK(f.y.at(1, 2) == 25.0);   // 100/4
    CHECK(f.cb.at(0, 0) == 75.0);  // 300/4: chroma planes follow the full luma plane
    CHECK(f.cr.at(0, 1) == 150.0);  // 600/4

    // A word above 1023 is invalid for 10-bit content.
    bytes[0] = 0x00;
    bytes[1] = 0x04;  // 1024 little-endian
    write_bytes(path, bytes);
    YuvReader bad(path, 4, 2, 10);
    CHECK_THROWS(bad.read_frame(0));
}

TEST_CASE("YuvReader rejects truncated files and bad indices") {
    const std::string dir = testutil::temp_dir("media_io");
    const std::string path = dir + "/trunc.yuv";
    write_bytes(path, std::vector<std::uint8_t>(11));  // not a multiple of 12
    CHECK_THROWS(YuvReader(path, 4, 2, 8));

    write_bytes(path, std::vector<std::uint8_t>(12));
    YuvReader r(path, 4, 2, 8);
    CHECK_THROWS(r.read_frame(1));
    CHECK_THROWS(r.read_frame(-1));
    CHECK_THROWS(YuvReader(dir + "/absent.yuv", 4, 2, 8));
}

TEST_CASE("write_yuv_frame round trips integer frames") {
    const std::string dir = testutil::temp_dir("media_io");
    for (int depth : {8, 10}) {
        const std::string path = dir + "/rt" + std::to_string(depth) + ".yuv";
        FramePlanes f = testutil::synth_frame(16, 16, 0, 77);
        write_yuv_frame(path, f, depth, false);
        write_yuv_frame(path, testutil::synth_frame(16, 16, 1, 77), depth, true);
        YuvReader r(path, 16, 16, depth);
        CHECK(r.frame_count() == 2);
        FramePlanes back = r.read_frame(0);
        CHECK(testutil::max_abs_diff(f.y, back.y) == 0.0);
        CHECK(testutil::max_abs_diff(f.cb, back.cb) == 0.0);
        CHECK(testutil::max_abs_diff(f.cr, back.cr) == 0.0);
    }
}

TEST_CASE("load_manifest parses rows, comments, and relative paths") {
    const std::string dir = testutil::temp_dir("manifest");
    testutil::write_synth_video(dir + "/ref1.yuv", 2, 16, 16, 1);
    testutil::write_synth_video(dir + "/dis1.yuv", 2, 16, 16, 2);
    {
        std::ofstream m(dir + "/set.csv");
        m << "ref_path,dis_path,width,height,bit_depth,mos\n";
        m << "# a comment line\n";
        m << "ref1.yuv,dis1.yuv,16,16,8,3.5\n";
    }
    DatasetManifest man = load_manifest(dir + "/set.csv");
    CHECK(man.name == "set");
    REQUIRE(man.rows.size() == 1);
    CHECK(man.rows[0].spec.width == 16);
    CHECK(man.rows[0].spec.bit_depth == 8);
    CHECK(man.rows[0].mos == 3.5);
    // Relative paths resolve against the manifest directory.
    CHECK(man.rows[0].ref_path == dir + "/ref1.yuv");

    {
        std::ofstream m(dir + "/bad_header.csv");
        m << "ref,dis,width,height,bit_depth,mos\n";
    }
    CHECK_THROWS(load_manifest(dir + "/bad_header.csv"));

    {
        std::ofstream m(dir + "/bad_row.csv");
        m << "ref_path,dis_path,width,height,bit_depth,mos\n";
        m << "ref1.yuv,dis1.yuv,16,16,8\n";
    }
    CHECK_THROWS_WITH_AS(load_manifest(dir + "/bad_row.csv"), doctest::Contains("row 2"), std::exception);

    {
        std::ofstream m(dir + "/missing_file.csv");
        m << "ref_path,dis_path,width,height,bit_depth,mos\n";
        m << "nope.yuv,dis1.yuv,16,16,8,1.0\n";
    }
    CHECK_THROWS(load_manifest(dir + "/missing_file.csv"));
}
