#include <gtest/gtest.h>

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args)
{
    const std::string cmd = std::string("\"") + ILLUMEST_CLI_PATH + "\" " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        static std::atomic<int> counter{0};
        dir = fs::temp_directory_path() /
              ("illumest_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string p(const std::string& name) const { return "\"" + (dir / name).string() + "\""; }

    void blob(const std::string& name, int row, int col)
    {
        ASSERT_EQ(run("synth blob --width 128 --height 128 --row " + std::to_string(row) +
                      " --col " + std::to_string(col) + " --sigma 3 -o " + p(name))
                      .code,
                  0);
    }

    fs::path dir;
};

} // namespace

TEST_F(Cli, AnalyzeBlobToStdout)
{
    blob("b.png", 44, 84);
    const RunResult r = run("analyze " + p("b.png") + " --blur 0.1");
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    ASSERT_TRUE(j.is_array());
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0].at("status"), "ok");
    EXPECT_NEAR(j[0].at("report").at("angle_deg").get<double>(), 45.0, 2.0);
    EXPECT_TRUE(j[0].at("report").contains("runtime_ms"));
}

TEST_F(Cli, JsonFileAndNoRuntime)
{
    blob("b.png", 30, 30);
    const RunResult r =
        run("analyze " + p("b.png") + " --blur 0.1 --no-runtime --json " + p("out.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    const json j = json::parse(slurp(dir / "out.json"));
    EXPECT_FALSE(j[0].at("report").contains("runtime_ms"));
}

TEST_F(Cli, DeterministicOutput)
{
    blob("b.png", 90, 20);
    const std::string args = "analyze " + p("b.png") + " --blur 0.1 --seed 7 --no-runtime";
    const RunResult a = run(args);
    const RunResult b = run(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(json::parse(a.out)[0].at("report").at("seed"), 7);
}

TEST_F(Cli, FailedImageExitsOne)
{
    blob("a.png", 20, 20);
    std::ofstream(dir / "bad.png") << "not an image";
    const RunResult r = run("analyze " + p("a.png") + " " + p("bad.png") + " " + p("missing.png") +
                            " --blur 0.1 --jobs 2");
    EXPECT_EQ(r.code, 1);
    const json j = json::parse(r.out);
    ASSERT_EQ(j.size(), 3u);
    EXPECT_EQ(j[0].at("status"), "ok");
    EXPECT_EQ(j[1].at("error").at("code"), "DecodeError");
    EXPECT_EQ(j[2].at("error").at("code"), "IoError");
}

TEST_F(Cli, UsageErrorsExitTwo)
{
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("analyze").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    blob("a.png", 20, 20);
    EXPECT_EQ(run("analyze " + p("a.png") + " --threshold 300").code, 2);
    EXPECT_EQ(run("analyze " + p("a.png") + " --threshold bright").code, 2);
    EXPECT_EQ(run("analyze " + p("a.png") + " --blur -1").code, 2);
    EXPECT_EQ(run("analyze " + p("a.png") + " --k 0").code, 2);
    EXPECT_EQ(run("synth blob --row 999 -o " + p("x.png")).code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, EmptyBrightSet)
{
    ASSERT_EQ(run("synth noise --width 32 --height 32 --n-bright 0 --background 0 -o " +
                  p("black.png"))
                  .code,
              0);
    RunResult r = run("analyze " + p("black.png"));
    ASSERT_EQ(r.code, 0);
    json rep = json::parse(r.out)[0].at("report");
    EXPECT_EQ(rep.at("warning"), "EmptyBrightSet");
    EXPECT_TRUE(rep.at("direction").is_null());
    EXPECT_TRUE(rep.at("wasserstein").is_null());

    r = run("analyze " + p("black.png") + " --paper-literal-empty");
    ASSERT_EQ(r.code, 0);
    rep = json::parse(r.out)[0].at("report");
    EXPECT_EQ(rep.at("centroid").at("row"), 0.0);
    EXPECT_EQ(rep.at("centroid").at("col"), 0.0);
}

TEST_F(Cli, AutoThreshold)
{
    blob("a.png", 64, 100);
    const RunResult r = run("analyze " + p("a.png") + " --threshold auto --blur 0.1");
    ASSERT_EQ(r.code, 0);
    const json rep = json::parse(r.out)[0].at("report");
    EXPECT_EQ(rep.at("threshold_mode"), "otsu");
}

TEST_F(Cli, OverlayIntoDirectory)
{
    blob("a.png", 40, 90);
    const RunResult r = run("analyze " + p("a.png") + " --blur 0.1 --overlay " + p("ov"));
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(fs::exists(dir / "ov" / "a.overlay.png"));
}

TEST_F(Cli, OverlayNextToInput)
{
    blob("a.png", 40, 90);
    const RunResult r = run("analyze " + p("a.png") + " --blur 0.1 --overlay");
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(fs::exists(dir / "a.overlay.png"));
}

TEST_F(Cli, SynthNoiseCounts)
{
    ASSERT_EQ(run("synth noise --width 50 --height 40 --n-bright 123 --seed 3 -o " + p("n.png")).code,
              0);
    const RunResult r = run("analyze " + p("n.png") + " --blur 0.1");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)[0].at("report").at("n_bright"), 123);
}
