#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using hestonabc::cli::run_cli;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("hestonabc_cli_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

int file_count(const fs::path& dir) {
  int n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.is_regular_file();
  return n;
}

}  // namespace

TEST(Cli, PriceWritesFieldAndMetadata) {
  TempDir dir;
  ASSERT_EQ(run_cli({"price", "--preset", "set1", "--bc", "mapabc2", "--h", "0.4", "--out",
                     dir.str(), "--threads", "1"}),
            0);
  const auto csv = dir.path() / "price_set1_mapabc2_h0p4.csv";
  ASSERT_TRUE(fs::exists(csv));
  EXPECT_EQ(first_line(csv), "i,j,s,v,value");
  EXPECT_EQ(lines(slurp(csv)), 1 + 11 * 11);
  EXPECT_TRUE(fs::exists(dir.path() / "price_set1_mapabc2_h0p4.meta.json"));
}

TEST(Cli, InvalidArgumentsExitTwo) {
  TempDir dir;
  EXPECT_EQ(run_cli({"price", "--h", "0", "--out", dir.str()}), 2);
  EXPECT_EQ(run_cli({"price", "--h", "-0.1", "--out", dir.str()}), 2);
  EXPECT_EQ(run_cli({"price", "--bc", "robin", "--out", dir.str()}), 2);
  EXPECT_EQ(run_cli({"price", "--preset", "set9", "--out", dir.str()}), 2);
  EXPECT_EQ(run_cli({"price", "--h", "0.3", "--out", dir.str()}), 2);
  EXPECT_EQ(run_cli({"table", "--no-such-flag"}), 2);
  EXPECT_EQ(run_cli({}), 2);
  EXPECT_EQ(file_count(dir.path()), 0);
}

TEST(Cli, TableWritesOneRowPerCell) {
  TempDir dir;
  ASSERT_EQ(run_cli({"table", "--preset", "set1", "--h", "0.4", "--out", dir.str()}), 0);
  const auto csv = dir.path() / "table_set1.csv";
  ASSERT_TRUE(fs::exists(csv));
  EXPECT_EQ(first_line(csv), "kind,h,error");
  EXPECT_EQ(lines(slurp(csv)), 5);
  EXPECT_NE(slurp(csv).find("original,0.4,0.0122284"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir.path() / "table_set1.meta.json"));
}

TEST(Cli, TableCheckPassesOnReferenceCells) {
  TempDir dir;
  EXPECT_EQ(run_cli({"table", "--preset", "set1", "--h", "0.4,0.2", "--check", "--out", dir.str()}),
            0);
}

TEST(Cli, GreeksWritesThreeFilesPerKind) {
  TempDir dir;
  ASSERT_EQ(run_cli({"greeks", "--preset", "set3", "--h", "0.4", "--out", dir.str()}), 0);
  EXPECT_EQ(file_count(dir.path()), 12);
  EXPECT_EQ(first_line(dir.path() / "greeks_set3_original_delta.csv"),
            "v,delta_num,delta_ref,abs_error");
  EXPECT_EQ(first_line(dir.path() / "greeks_set3_mapabc2_vega.csv"),
            "v,vega_num,vega_ref,abs_error");
}

TEST(Cli, SliceWritesProfile) {
  TempDir dir;
  ASSERT_EQ(run_cli({"slice", "--preset", "set1", "--bc", "original", "--h", "0.4", "--axis", "s",
                     "--out", dir.str()}),
            0);
  const auto csv = dir.path() / "slice_set1_original_s4.csv";
  ASSERT_TRUE(fs::exists(csv)) << "files: " << file_count(dir.path());
  EXPECT_EQ(first_line(csv), "axis,coord,value_ref,value_num,abs_error");
  EXPECT_EQ(lines(slurp(csv)), 1 + 11);
  EXPECT_EQ(run_cli({"slice", "--preset", "set1", "--h", "0.4", "--axis", "s", "--at", "1.1",
                     "--out", dir.str()}),
            2);
}

TEST(Cli, ConfigFileSuppliesOptions) {
  TempDir dir;
  const auto cfg = dir.path() / "run.toml";
  {
    std::ofstream out(cfg);
    out << "preset = \"set1\"\nbc = \"original\"\nh = 0.4\n";
  }
  const auto out_dir = (dir.path() / "out").string();
  ASSERT_EQ(run_cli({"price", "--config", cfg.string(), "--out", out_dir}), 0);
  EXPECT_TRUE(fs::exists(fs::path(out_dir) / "price_set1_original_h0p4.csv"));
}
