#include <illumest/illumest.h>

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

class CApi : public ::testing::Test {
protected:
    void SetUp() override
    {
        static std::atomic<int> counter{0};
        dir = fs::temp_directory_path() /
              ("illumest_capi_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(dir);
        ASSERT_EQ(ilm_options_create(&opts), ILM_OK);
        ASSERT_EQ(ilm_options_set_blur(opts, 0.1), ILM_OK);
    }
    void TearDown() override
    {
        ilm_options_destroy(opts);
        fs::remove_all(dir);
    }

    std::string path(const char* name) const { return (dir / name).string(); }

    std::string blob(const char* name, int row, int col)
    {
        const std::string p = path(name);
        EXPECT_EQ(ilm_synth_blob_png(128, 128, row, col, 3.0, 255, 10, p.c_str()), ILM_OK);
        return p;
    }

    fs::path dir;
    ilm_options* opts = nullptr;
};

std::string take(char* s)
{
    std::string out(s);
    ilm_string_free(s);
    return out;
}

} // namespace

TEST_F(CApi, VersionAndStatusStrings)
{
    EXPECT_STREQ(ilm_version(), "0.1.0");
    EXPECT_STREQ(ilm_status_string(ILM_OK), "ok");
    EXPECT_STREQ(ilm_status_string(ILM_ERR_DECODE), "decode error");
    EXPECT_STREQ(ilm_status_string(ILM_ERR_NOT_AVAILABLE), "not available");
}

TEST_F(CApi, AnalyzeBlobFile)
{
    const std::string p = blob("b.png", 44, 84);
    ilm_report* r = nullptr;
    ASSERT_EQ(ilm_analyze_file(opts, p.c_str(), &r), ILM_OK);
    EXPECT_GT(ilm_report_n_bright(r), 0u);
    EXPECT_EQ(ilm_report_threshold(r), 200);
    EXPECT_EQ(ilm_report_has_warning(r), 0);
    double row = 0, col = 0, angle = 0, w2 = -1, h = -1;
    ASSERT_EQ(ilm_report_centroid(r, &row, &col), ILM_OK);
    EXPECT_NEAR(row, 44.0, 0.5);
    EXPECT_NEAR(col, 84.0, 0.5);
    ASSERT_EQ(ilm_report_angle_deg(r, &angle), ILM_OK);
    EXPECT_NEAR(angle, 45.0, 2.0);
    EXPECT_EQ(ilm_report_w2(r, &w2), ILM_OK);
    EXPECT_GT(w2, 0.0);
    EXPECT_EQ(ilm_report_hausdorff(r, &h), ILM_OK);
    EXPECT_GT(h, 0.0);
    ilm_report_destroy(r);
}

TEST_F(CApi, AnalyzeMemoryMatchesFile)
{
    const std::string p = blob("m.png", 30, 90);
    std::ifstream in(p, std::ios::binary);
    const std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), {});
    ilm_report* a = nullptr;
    ilm_report* b = nullptr;
    ASSERT_EQ(ilm_analyze_file(opts, p.c_str(), &a), ILM_OK);
    ASSERT_EQ(ilm_analyze_memory(opts, bytes.data(), bytes.size(), p.c_str(), &b), ILM_OK);
    char* ja = nullptr;
    char* jb = nullptr;
    ASSERT_EQ(ilm_report_to_json(a, 0, &ja), ILM_OK);
    ASSERT_EQ(ilm_report_to_json(b, 0, &jb), ILM_OK);
    EXPECT_EQ(take(ja), take(jb));
    ilm_report_destroy(a);
    ilm_report_destroy(b);
}

TEST_F(CApi, JsonRoundTrip)
{
    const std::string p = blob("j.png", 100, 20);
    ilm_report* r = nullptr;
    ASSERT_EQ(ilm_analyze_file(opts, p.c_str(), &r), ILM_OK);
    char* text = nullptr;
    ASSERT_EQ(ilm_report_to_json(r, 1, &text), ILM_OK);
    const std::string first = take(text);
    ilm_report* back = nullptr;
    ASSERT_EQ(ilm_report_from_json(first.c_str(), &back), ILM_OK);
    ASSERT_EQ(ilm_report_to_json(back, 1, &text), ILM_OK);
    EXPECT_EQ(take(text), first);
    ilm_report_destroy(r);
    ilm_report_destroy(back);

    EXPECT_EQ(ilm_report_from_json("{not json", &back), ILM_ERR_INVALID_ARGUMENT);
    EXPECT_NE(std::strlen(ilm_last_error()), 0u);
}

TEST_F(CApi, EmptyBrightSet)
{
    const std::string p = path("black.png");
    ASSERT_EQ(ilm_synth_noise_png(16, 16, 0, 255, 0, 0, p.c_str()), ILM_OK);
    ilm_report* r = nullptr;
    ASSERT_EQ(ilm_analyze_file(opts, p.c_str(), &r), ILM_OK);
    EXPECT_EQ(ilm_report_has_warning(r), 1);
    EXPECT_EQ(ilm_report_n_bright(r), 0u);
    double a = 0, b = 0;
    EXPECT_EQ(ilm_report_direction(r, &a, &b), ILM_ERR_NOT_AVAILABLE);
    EXPECT_EQ(ilm_report_w2(r, &a), ILM_ERR_NOT_AVAILABLE);
    ilm_report_destroy(r);

    ASSERT_EQ(ilm_options_set_paper_literal_empty(opts, 1), ILM_OK);
    ASSERT_EQ(ilm_analyze_file(opts, p.c_str(), &r), ILM_OK);
    ASSERT_EQ(ilm_report_centroid(r, &a, &b), ILM_OK);
    EXPECT_EQ(a, 0.0);
    EXPECT_EQ(b, 0.0);
    ilm_report_destroy(r);
}

TEST_F(CApi, ErrorCodes)
{
    ilm_report* r = nullptr;
    EXPECT_EQ(ilm_analyze_file(opts, path("nope.png").c_str(), &r), ILM_ERR_IO);
    EXPECT_EQ(r, nullptr);
    const uint8_t junk[] = {1, 2, 3, 4};
    EXPECT_EQ(ilm_analyze_memory(opts, junk, sizeof junk, "junk", &r), ILM_ERR_DECODE);
    EXPECT_EQ(ilm_analyze_file(opts, nullptr, &r), ILM_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(ilm_analyze_file(nullptr, "x", &r), ILM_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(ilm_options_set_threshold(opts, 256), ILM_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(ilm_options_set_blur(opts, 0.0), ILM_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(ilm_options_set_k(opts, 0), ILM_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(ilm_synth_blob_png(8, 8, 9, 0, 1.0, 255, 10, path("x.png").c_str()),
              ILM_ERR_INVALID_ARGUMENT);
}

TEST_F(CApi, OtsuOnConstantImageIsDegenerate)
{
    const std::string p = path("flat.png");
    ASSERT_EQ(ilm_synth_noise_png(8, 8, 0, 255, 40, 0, p.c_str()), ILM_OK);
    ASSERT_EQ(ilm_options_set_auto_threshold(opts, 1), ILM_OK);
    ilm_report* r = nullptr;
    EXPECT_EQ(ilm_analyze_file(opts, p.c_str(), &r), ILM_ERR_DEGENERATE);
}

TEST_F(CApi, Batch)
{
    const std::string a = blob("a.png", 20, 20);
    const std::string bad = path("bad.png");
    std::ofstream(bad) << "garbage";
    const std::string c = blob("c.png", 100, 100);
    const char* paths[] = {a.c_str(), bad.c_str(), c.c_str()};
    ilm_batch* b = nullptr;
    ASSERT_EQ(ilm_batch_run(opts, paths, 3, 2, &b), ILM_OK);
    ASSERT_EQ(ilm_batch_size(b), 3u);
    EXPECT_EQ(ilm_batch_item_status(b, 0), ILM_OK);
    EXPECT_EQ(ilm_batch_item_status(b, 1), ILM_ERR_DECODE);
    EXPECT_EQ(ilm_batch_item_status(b, 2), ILM_OK);
    EXPECT_EQ(ilm_batch_item_report(b, 1), nullptr);
    EXPECT_NE(ilm_batch_item_report(b, 2), nullptr);
    EXPECT_STREQ(ilm_batch_item_path(b, 1), bad.c_str());
    EXPECT_NE(std::strlen(ilm_batch_item_error(b, 1)), 0u);
    char* text = nullptr;
    ASSERT_EQ(ilm_batch_to_json(b, 0, &text), ILM_OK);
    const std::string json = take(text);
    EXPECT_NE(json.find("\"status\": \"error\""), std::string::npos);
    EXPECT_EQ(json.find("runtime_ms"), std::string::npos);
    ilm_batch_destroy(b);
}

TEST_F(CApi, Overlay)
{
    const std::string p = blob("o.png", 40, 40);
    ilm_report* r = nullptr;
    ASSERT_EQ(ilm_analyze_file(opts, p.c_str(), &r), ILM_OK);
    const std::string out = path("o.overlay.png");
    ASSERT_EQ(ilm_render_overlay(p.c_str(), r, out.c_str()), ILM_OK);
    EXPECT_TRUE(fs::exists(out));
    const std::string small = path("small.png");
    ASSERT_EQ(ilm_synth_noise_png(8, 8, 3, 255, 0, 1, small.c_str()), ILM_OK);
    EXPECT_EQ(ilm_render_overlay(small.c_str(), r, out.c_str()), ILM_ERR_DIMENSION_MISMATCH);
    ilm_report_destroy(r);
}

TEST_F(CApi, NullHandlesAreSafe)
{
    ilm_options_destroy(nullptr);
    ilm_report_destroy(nullptr);
    ilm_batch_destroy(nullptr);
    ilm_string_free(nullptr);
    EXPECT_EQ(ilm_report_n_bright(nullptr), 0u);
    EXPECT_EQ(ilm_batch_size(nullptr), 0u);
}
