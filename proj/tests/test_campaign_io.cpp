// SPDX-License-Identifier: Apache-2.0
//
// chsound - channel sounder post-processing and channel statistics
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "support.hpp"

#include "chsound/capture_io.hpp"
#include "chsound/error.hpp"
#include "chsound/manifest.hpp"
#include "chsound/pipeline.hpp"
#include "chsound/synth_campaign.hpp"
#include "chsound/table_io.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>

using namespace chsound;
using namespace chsound::testing;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace
{

ComplexRecord float_record(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<float> g(0.0f, 1.0f);
    ComplexRecord r;
    r.sample_rate_hz = 320e6;
    r.kind = RecordKind::Measurement;
    r.center_frequency_hz = 5e9;
    r.samples.resize(n);
    for (auto &s : r.samples)
        s = {static_cast<double>(g(rng)), static_cast<double>(g(rng))};
    return r;
}

void patch(const std::filesystem::path &p, std::size_t offset, const std::string &bytes)
{
    std::fstream f(p, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(static_cast<std::streamoff>(offset));
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Errc code_of(const std::function<void()> &fn)
{
    try
    {
        fn();
    }
    catch (const Error &e)
    {
        return e.code();
    }
    FAIL("no chsound::Error thrown");
    return Errc::InvalidInput;
}

} // namespace

TEST_CASE("capture round trip is bit-exact", "[capture]")
{
    const auto dir = scratch_dir("capture_rt");
    for (auto kind : {RecordKind::Calibration, RecordKind::Measurement})
    {
        auto rec = float_record(4800, 3);
        rec.kind = kind;
        write_capture(dir / "a.cap", rec);
        CHECK(std::filesystem::file_size(dir / "a.cap") == capture_header_bytes + 8 * 4800);
        const auto back = read_capture(dir / "a.cap");
        CHECK(back.samples == rec.samples);
        CHECK(back.sample_rate_hz == rec.sample_rate_hz);
        CHECK(back.kind == kind);
        CHECK(back.center_frequency_hz == rec.center_frequency_hz);
    }

    const auto head = slurp(dir / "a.cap").substr(0, 16);
    CHECK(head.substr(0, 12) == "CHSNDCAPTURE");
    CHECK(head[12] == 1);
    CHECK(head[13] == 0);
}

TEST_CASE("capture format errors", "[capture]")
{
    const auto dir = scratch_dir("capture_err");
    const auto rec = float_record(64, 9);

    SECTION("corrupted magic")
    {
        write_capture(dir / "m.cap", rec);
        patch(dir / "m.cap", 2, "X");
        CHECK(code_of([&] { read_capture(dir / "m.cap"); }) == Errc::FormatError);
        CHECK_THROWS_WITH(read_capture(dir / "m.cap"), ContainsSubstring("byte offset 0"));
    }
    SECTION("unsupported version")
    {
        write_capture(dir / "v.cap", rec);
        patch(dir / "v.cap", 12, std::string("\x02", 1));
        CHECK_THROWS_WITH(read_capture(dir / "v.cap"), ContainsSubstring("byte offset 12"));
    }
    SECTION("truncated payload reports the offset")
    {
        write_capture(dir / "t.cap", rec);
        std::filesystem::resize_file(dir / "t.cap", capture_header_bytes + 8 * 64 - 5);
        CHECK(code_of([&] { read_capture(dir / "t.cap"); }) == Errc::FormatError);
        CHECK_THROWS_WITH(read_capture(dir / "t.cap"),
                          ContainsSubstring("byte offset " + std::to_string(capture_header_bytes + 8 * 64 - 5)));
    }
    SECTION("truncated header")
    {
        write_capture(dir / "h.cap", rec);
        std::filesystem::resize_file(dir / "h.cap", 20);
        CHECK(code_of([&] { read_capture(dir / "h.cap"); }) == Errc::FormatError);
    }
    SECTION("trailing bytes")
    {
        write_capture(dir / "x.cap", rec);
        {
            std::ofstream f(dir / "x.cap", std::ios::binary | std::ios::app);
            f << "zz";
        }
        CHECK_THROWS_WITH(read_capture(dir / "x.cap"), ContainsSubstring("trailing"));
    }
    SECTION("unknown kind")
    {
        write_capture(dir / "k.cap", rec);
        patch(dir / "k.cap", 28, std::string("\x07", 1));
        CHECK(code_of([&] { read_capture(dir / "k.cap"); }) == Errc::FormatError);
    }
    SECTION("missing file")
    {
        CHECK(code_of([&] { read_capture(dir / "absent.cap"); }) == Errc::IoError);
    }
}

TEST_CASE("default manifest layout", "[manifest]")
{
    const auto m = default_manifest(true, DistanceMode::D2);
    CHECK(m.positions.size() == 37 + 35);
    CHECK(m.bands_ghz == std::vector<double>{2.4, 5.0, 6.0});
    CHECK(m.record_len == 4800);
    CHECK(m.reps_per_position == 5);
    CHECK(m.snapshots_per_rep == 400);
    CHECK_THAT(m.delay_bin_s() * 1e9, WithinAbs(3.125, 1e-12));
    CHECK(m.positions.front().position_id == "L01");
    CHECK(m.positions[36].position_id == "L37");
    CHECK(m.positions[37].position_id == "N03");
    CHECK_THAT(m.positions[1].rx_pos_m - m.positions[0].rx_pos_m, WithinAbs(0.8, 1e-12));
    CHECK(m.positions[36].rx_pos_m <= m.corridor_length_m);
    CHECK_THAT(m.positions[0].distance_3d_m, WithinAbs(std::hypot(1.0, 0.5), 1e-12));
    CHECK_THAT(m.positions[37].distance_2d_m, WithinAbs(std::hypot(m.positions[2].rx_pos_m, nlos_tx_offset_m), 1e-12));
    CHECK(default_manifest().positions.size() == 37);
    CHECK_NOTHROW(m.validate());
}

TEST_CASE("manifest JSON round trip and validation", "[manifest]")
{
    auto m = default_manifest(true, DistanceMode::D3);
    m.thresholds.snr_gate_db = 20.0;
    m.link_budget.gatt_db = 27.5;
    const auto back = manifest_from_json(nlohmann::json::parse(to_json(m).dump()));
    CHECK(to_json(back) == to_json(m));
    CHECK(back.distance_mode == DistanceMode::D3);

    auto no_mode = nlohmann::json::parse(to_json(m).dump());
    no_mode.erase("distance_mode");
    CHECK(code_of([&] { manifest_from_json(no_mode); }) == Errc::InvalidInput);

    auto bad_dist = nlohmann::json::parse(to_json(m).dump());
    bad_dist["positions"][4]["distance_2d_m"] = 0.5;
    CHECK(code_of([&] { manifest_from_json(bad_dist); }) == Errc::InvalidInput);

    auto dup = nlohmann::json::parse(to_json(m).dump());
    dup["positions"][1]["position_id"] = "L01";
    CHECK(code_of([&] { manifest_from_json(dup); }) == Errc::InvalidInput);

    auto empty = nlohmann::json::parse(to_json(m).dump());
    empty["positions"] = nlohmann::json::array();
    CHECK(code_of([&] { manifest_from_json(empty); }) == Errc::InvalidInput);

    auto wrong_type = nlohmann::json::parse(to_json(m).dump());
    wrong_type["record_len"] = "long";
    CHECK(code_of([&] { manifest_from_json(wrong_type); }) == Errc::InvalidInput);

    // Distances default to the coordinates when omitted.
    auto coords = nlohmann::json::parse(to_json(m).dump());
    coords["positions"][0].erase("distance_2d_m");
    coords["positions"][0].erase("distance_3d_m");
    const auto c = manifest_from_json(coords);
    CHECK(c.positions[0].distance_2d_m == 1.0);
    CHECK_THAT(c.positions[0].distance_3d_m, WithinAbs(std::hypot(1.0, 0.5), 1e-12));

    CHECK(band_tag(2.4) == "2.4GHz");
    CHECK(band_tag(5.0) == "5GHz");
}

TEST_CASE("number formatting", "[table]")
{
    CHECK(format_2dp(1.005) == "1.00");
    CHECK(format_2dp(-0.001) == "0.00");
    CHECK(format_2dp(84.0) == "84.00");
    CHECK(format_2dp(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_2dp(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(round_to(1.23456, 4) == 1.2346);
}

TEST_CASE("position table round trip", "[table]")
{
    const auto dir = scratch_dir("positions");
    std::vector<PositionReport> rows = {
        {"L01", 2.4, Scenario::LOS, PositionStatus::OK, 1.0, 41.234, 5.016, 7.1, 6},
        {"L02", 2.4, Scenario::LOS, PositionStatus::AllSnapshotsRejected, 1.8, {}, {}, {}, {}},
        {"N03", 5.0, Scenario::NLOS, PositionStatus::OK, 3.97, 69.7, 16.3, -std::numeric_limits<double>::infinity(), 15},
        {"N04", 5.0, Scenario::NLOS, PositionStatus::EmptyMpcSet, 4.5, {}, {}, {}, {}},
    };
    write_positions_csv(dir / "p.csv", rows);
    const auto text = slurp(dir / "p.csv");
    CHECK(text.rfind(std::string(position_csv_header) + "\n", 0) == 0);
    CHECK(text.find("L01,2.4,LOS,OK,1.000,41.23,5.02,7.10,6\n") != std::string::npos);
    CHECK(text.find("L02,2.4,LOS,AllSnapshotsRejected,1.800,,,,\n") != std::string::npos);

    const auto back = read_positions_csv(dir / "p.csv");
    REQUIRE(back.size() == 4);
    CHECK(back[0].pl_db == 41.23);
    CHECK(back[1].status == PositionStatus::AllSnapshotsRejected);
    CHECK_FALSE(back[1].pl_db.has_value());
    CHECK(back[2].kf_db == -std::numeric_limits<double>::infinity());
    CHECK(back[3].status == PositionStatus::EmptyMpcSet);

    const auto samples = read_pl_samples_csv(dir / "p.csv");
    REQUIRE(samples.size() == 2);
    CHECK(samples[1].scenario == Scenario::NLOS);
    CHECK(samples[1].frequency_ghz == 5.0);

    write_text(dir / "bad.csv", std::string(position_csv_header) + "\nL01,2.4,LOS,OK,1.0,,1,1,1\n");
    CHECK(code_of([&] { read_positions_csv(dir / "bad.csv"); }) == Errc::FormatError);
    write_text(dir / "bad2.csv", std::string(position_csv_header) + "\nL01,2.4,LOS,EmptyMpcSet,1.0,50,1,1,1\n");
    CHECK(code_of([&] { read_positions_csv(dir / "bad2.csv"); }) == Errc::FormatError);
    write_text(dir / "bad3.csv", std::string(position_csv_header) + "\nL01,2.4,LOS,OK,x,1,1,1,1\n");
    CHECK(code_of([&] { read_positions_csv(dir / "bad3.csv"); }) == Errc::FormatError);

    // The fit input needs only the five sample columns, in any order.
    write_text(dir / "samples.csv", "pl_db,distance_m,band_ghz,scenario,position_id\n50,2,6,LOS,A\n60,20,6,LOS,B\n");
    const auto s = read_pl_samples_csv(dir / "samples.csv");
    REQUIRE(s.size() == 2);
    CHECK(s[1].distance_m == 20.0);
    CHECK(s[1].pl_db == 60.0);
}

TEST_CASE("fits JSON layout", "[table]")
{
    std::vector<PlSample> samples;
    for (double d : {1.0, 2.0, 4.0, 8.0})
        samples.push_back({"P", d, 5.0, eval_fi(d, 1.75, 48.93), Scenario::LOS});
    samples.push_back({"Q", 3.0, 5.0, 70.0, Scenario::NLOS});
    const auto groups = fit_groups(samples);
    REQUIRE(groups.size() == 2);
    const auto j = fits_to_json(groups);
    CHECK(j[0]["FI"]["alpha"] == 1.75);
    CHECK(j[0]["FI"]["beta_db"] == 48.93);
    CHECK(j[0]["FI"]["sigma_db"] == 0.0);
    CHECK(j[1]["error"].get<std::string>().find("DegenerateGeometry") != std::string::npos);
}

TEST_CASE("truth model JSON round trip", "[synth]")
{
    auto t = default_truth();
    t.tap_k_db = 12.0;
    t.blocked_positions = {"L07"};
    const auto back = truth_from_json(nlohmann::json::parse(to_json(t).dump()));
    CHECK(to_json(back) == to_json(t));
    CHECK(back.band(5.0).los.ple == 1.75);
    CHECK(back.band(6.0).nlos.beta_db == 67.91);
    CHECK(code_of([&] { back.band(28.0); }) == Errc::InvalidInput);

    auto bad = nlohmann::json::parse(to_json(t).dump());
    bad["bands"][0]["LOS"]["model"] = "ABG";
    CHECK(code_of([&] { truth_from_json(bad); }) == Errc::InvalidInput);
}
