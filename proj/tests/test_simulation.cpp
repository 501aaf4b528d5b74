#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bakercode/simulation.hpp"
#include "test_support.hpp"

using namespace bakercode;

namespace {

ExperimentConfig base_config() {
    ExperimentConfig cfg;
    cfg.code = CodeParams{3, 2, true};
    cfg.delta = 1.0;
    cfg.ep_mode = EpMode::measured;
    cfg.trials = 1;
    cfg.seed = 42;
    return cfg;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("noiseless analog transmission is lossless") {
    const GrayImage img = test_support::test_image(32, 32);
    ExperimentConfig cfg = base_config();
    cfg.snr_db_list = {std::numeric_limits<double>::infinity()};

    const SweepResult result = sweep_image(img, cfg);
    REQUIRE(result.records.size() == 1);
    CHECK(result.reconstructions[0] == img);
    CHECK(result.records[0].mse_mean == 0.0);
    CHECK(std::isinf(result.records[0].psnr_mean_db));
    CHECK(result.records[0].psnr_std_db == 0.0);
}

TEST_CASE("transmitted symbol accounting") {
    const GrayImage img = test_support::test_image(32, 32);  // 1024 pixels
    ExperimentConfig cfg = base_config();
    cfg.snr_db_list = {std::numeric_limits<double>::infinity()};

    const SweepResult analog = sweep_image(img, cfg);
    CHECK(analog.symbols_per_pixel == 4.0);
    CHECK(analog.pad_count == 2);  // 1024 = 3 * 341 + 1
    CHECK(analog.symbols_per_trial == (1024 + 2) * 4);

    cfg.system = SystemKind::digital_uncoded;
    const SweepResult digital = sweep_image(img, cfg);
    CHECK(digital.symbols_per_pixel == 2.0);
    CHECK(digital.symbols_per_trial == 1024 * 2);
}

TEST_CASE("identical configuration and seed reproduce identical results") {
    const GrayImage img = test_support::test_image(24, 24);
    ExperimentConfig cfg = base_config();
    cfg.snr_db_list = {12.0};
    cfg.trials = 3;

    const SweepResult a = sweep_image(img, cfg);
    const SweepResult b = sweep_image(img, cfg);
    CHECK(a.reconstructions[0] == b.reconstructions[0]);
    CHECK(a.records[0].mse_mean == b.records[0].mse_mean);
    CHECK(a.records[0].psnr_mean_db == b.records[0].psnr_mean_db);
    CHECK(a.records[0].psnr_std_db == b.records[0].psnr_std_db);

    cfg.seed = 43;
    const SweepResult c = sweep_image(img, cfg);
    CHECK(a.records[0].mse_mean != c.records[0].mse_mean);
}

TEST_CASE("higher SNR means better reconstruction") {
    const GrayImage img = test_support::test_image(32, 32);
    ExperimentConfig cfg = base_config();
    cfg.snr_db_list = {8.0, 20.0};
    cfg.trials = 3;

    const SweepResult result = sweep_image(img, cfg);
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].psnr_mean_db < result.records[1].psnr_mean_db);
    CHECK(result.records[0].mse_mean > result.records[1].mse_mean);
}

TEST_CASE("nominal and measured energy modes give nearby operating points") {
    const GrayImage img = test_support::test_image(32, 32);
    ExperimentConfig cfg = base_config();
    cfg.snr_db_list = {14.0};
    cfg.trials = 5;

    cfg.ep_mode = EpMode::measured;
    const SweepRecord measured = sweep_image(img, cfg).records[0];
    cfg.ep_mode = EpMode::nominal;
    const SweepRecord nominal = sweep_image(img, cfg).records[0];

    CHECK(measured.psnr_mean_db != nominal.psnr_mean_db);
    CHECK(std::abs(measured.psnr_mean_db - nominal.psnr_mean_db) < 3.0);
}

TEST_CASE("digital baseline is exact without noise and floors at low SNR") {
    const GrayImage img = test_support::test_image(32, 32);
    ExperimentConfig cfg = base_config();
    cfg.system = SystemKind::digital_uncoded;
    cfg.snr_db_list = {std::numeric_limits<double>::infinity()};

    const SweepResult clean = sweep_image(img, cfg);
    CHECK(clean.reconstructions[0] == img);
    CHECK(std::isinf(clean.records[0].psnr_mean_db));

    cfg.snr_db_list = {-20.0};
    cfg.trials = 3;
    const SweepResult noisy = sweep_image(img, cfg);
    CHECK(noisy.records[0].psnr_mean_db < 12.0);
    CHECK(noisy.records[0].psnr_mean_db > 4.0);
}

TEST_CASE("a most-significant-nibble error moves the pixel by at least 16 levels") {
    GrayImage img;
    img.width = 1;
    img.height = 1;
    img.pixels = {0x57};
    const ModulatedFrame f = detail::digital_modulate(img, 1.0);
    REQUIRE(f.i_stream.size() == 1);
    // Push the high-nibble symbol one constellation step up (2/15 in
    // amplitude): the decoded pixel jumps a full 16 levels.
    ModulatedFrame bumped = f;
    bumped.i_stream[0] += 2.0 / 15.0;
    const int hi = detail::ask16_decide(bumped.i_stream[0], 1.0);
    const int lo = detail::ask16_decide(bumped.q_stream[0], 1.0);
    CHECK(hi * 16 + lo == 0x57 + 16);
}

TEST_CASE("run_sweep emits csv, json and reconstructions") {
    TempDir dir("bakercode_sweep_out");
    const GrayImage img = test_support::test_image(24, 24);
    const auto input = dir.path / "input.pgm";
    save_pgm(img, input.string());

    ExperimentConfig cfg = base_config();
    cfg.input_path = input.string();
    cfg.out_dir = (dir.path / "results").string();
    cfg.snr_db_list = {std::numeric_limits<double>::infinity(), 14.0};
    cfg.trials = 2;

    const SweepResult result = run_sweep(cfg);
    REQUIRE(result.records.size() == 2);

    const auto csv_path = dir.path / "results" / "sweep.csv";
    const auto json_path = dir.path / "results" / "sweep.json";
    REQUIRE(std::filesystem::exists(csv_path));
    REQUIRE(std::filesystem::exists(json_path));
    REQUIRE(std::filesystem::exists(dir.path / "results" / "recon_noiseless.pgm"));
    REQUIRE(std::filesystem::exists(dir.path / "results" / "recon_14.pgm"));

    // Schema: fixed header, one row per SNR point.
    std::ifstream csv(csv_path);
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "snr_db,mse_mean,psnr_mean_db,psnr_std_db,trials");
    int rows = 0;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);

    const nlohmann::json j = nlohmann::json::parse(slurp(json_path));
    CHECK(j["records"].size() == 2);
    CHECK(j["records"][0]["psnr_mean_db"] == "inf");
    CHECK(j["symbols_per_pixel"] == 4.0);
    CHECK(j["trials"] == 2);

    // The noiseless reconstruction is the input, byte for byte.
    CHECK(slurp(dir.path / "results" / "recon_noiseless.pgm") == slurp(input));

    // Same config, same seed: identical emitted bytes.
    ExperimentConfig cfg2 = cfg;
    cfg2.out_dir = (dir.path / "results2").string();
    run_sweep(cfg2);
    CHECK(slurp(dir.path / "results2" / "sweep.csv") == slurp(csv_path));
    CHECK(slurp(dir.path / "results2" / "recon_14.pgm") ==
          slurp(dir.path / "results" / "recon_14.pgm"));
}

TEST_CASE("run_single matches a one-trial sweep") {
    TempDir dir("bakercode_single_out");
    const GrayImage img = test_support::test_image(24, 24);
    const auto input = dir.path / "input.pgm";
    save_pgm(img, input.string());

    ExperimentConfig cfg = base_config();
    cfg.input_path = input.string();
    cfg.snr_db_list = {16.0};
    cfg.trials = 7;  // run_single forces one trial
    cfg.out_dir = (dir.path / "single").string();
    const SweepResult single = run_single(cfg);

    cfg.trials = 1;
    cfg.out_dir = (dir.path / "sweep1").string();
    const SweepResult sweep = run_sweep(cfg);

    REQUIRE(single.records.size() == 1);
    CHECK(single.records[0].trials == 1);
    CHECK(single.records[0].mse_mean == sweep.records[0].mse_mean);
    CHECK(single.records[0].psnr_mean_db == sweep.records[0].psnr_mean_db);
    CHECK(single.reconstructions[0] == sweep.reconstructions[0]);
}

TEST_CASE("configuration validation") {
    const GrayImage img = test_support::test_image(8, 8);
    ExperimentConfig cfg = base_config();
    cfg.snr_db_list = {};
    CHECK_THROWS_AS(sweep_image(img, cfg), std::invalid_argument);

    cfg.snr_db_list = {10.0};
    cfg.trials = 0;
    CHECK_THROWS_AS(sweep_image(img, cfg), std::invalid_argument);

    cfg.trials = 1;
    cfg.delta = 0.0;
    CHECK_THROWS_AS(sweep_image(img, cfg), std::invalid_argument);
}
