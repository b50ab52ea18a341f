#include <gtest/gtest.h>

#include "clusterlab/cli.hpp"

using namespace clusterlab;

namespace {

std::vector<SweepRecord> small_rows() {
  std::vector<SweepRecord> rows;
  for (int n : {8, 12})
    for (int i = 0; i < 4; ++i) {
      SweepRecord r;
      r.lambda = 0.1 * i + 1.0 / 3.0;
      r.n_sites = n;
      r.energy = -n * (1.0 + 0.1 * i);
      r.gap = 0.123456789012345678 * i;
      r.string_order = 1.0 / (i + 1);
      r.staggered_corr = -1e-17 * i;
      r.geo_ent = n / 2.0 - 0.3 * i;
      r.geo_ent_per_site = r.geo_ent / n;
      rows.push_back(r);
    }
  fill_derivatives(rows);
  return rows;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("clusterlab_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

int run_cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "clusterlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream os, es;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), os, es);
  if (out) *out = os.str();
  return code;
}

}  // namespace

TEST(LambdaRange, Inclusive) {
  const auto g = parse_lambda_range("0:2:0.02");
  ASSERT_EQ(g.size(), 101u);
  EXPECT_DOUBLE_EQ(g.front(), 0.0);
  EXPECT_NEAR(g.back(), 2.0, 1e-12);
  EXPECT_EQ(parse_lambda_range("0:1:0.3").size(), 4u);   // 0.9 is the last point
  EXPECT_EQ(parse_lambda_range("0:1:0.4").size(), 4u);   // 1.2 lies within half a step of 1
  EXPECT_EQ(parse_lambda_range("0.7"), std::vector<double>{0.7});
}

TEST(LambdaRange, Rejects) {
  for (const char* s : {"", "a:1:0.1", "0:1", "0:1:0", "1:0:0.1", "-1:1:0.5", "0:1:0.1:2", "0.5x"})
    EXPECT_THROW(parse_lambda_range(s), std::invalid_argument) << s;
}

TEST(Csv, RoundTripIsIdentity) {
  const auto rows = small_rows();
  const std::string text = to_csv(rows);
  std::istringstream in(text);
  const auto back = parse_csv(in);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].lambda, rows[i].lambda);
    EXPECT_EQ(back[i].gap, rows[i].gap);
    EXPECT_EQ(back[i].staggered_corr, rows[i].staggered_corr);
    EXPECT_EQ(back[i].geo_ent_deriv.has_value(), rows[i].geo_ent_deriv.has_value());
    if (rows[i].geo_ent_deriv) {
      EXPECT_EQ(*back[i].geo_ent_deriv, *rows[i].geo_ent_deriv);
    }
  }
  EXPECT_EQ(to_csv(back), text);
}

TEST(Csv, HeaderAndEmptyDerivative) {
  const std::string text = to_csv(small_rows());
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "lambda,n_sites,boundary,energy,gap,string_order,staggered_corr,geo_ent,geo_ent_per_site,geo_ent_deriv");
  const auto second = text.substr(text.find('\n') + 1);
  EXPECT_EQ(second.substr(0, second.find('\n')).back(), ',');
}

TEST(Csv, RejectsBadHeader) {
  std::istringstream in("lambda,n\n0,8\n");
  EXPECT_THROW(parse_csv(in), std::invalid_argument);
}

TEST(Svg, OnePolylinePerChainLength) {
  const auto rows = small_rows();
  const auto svg = emit_svg(rows, "lambda", "geo_ent_per_site");
  std::size_t count = 0;
  for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++count;
  EXPECT_EQ(count, 2u);
  EXPECT_EQ(svg, emit_svg(rows, "lambda", "geo_ent_per_site"));
  std::vector<SweepRecord> one(rows.begin(), rows.begin() + 4);
  const auto svg1 = emit_svg(one, "lambda", "geo_ent_deriv");
  EXPECT_EQ(svg1.find("<polyline"), svg1.rfind("<polyline"));
}

TEST(Svg, Errors) {
  EXPECT_THROW(emit_svg(small_rows(), "lambda", "nope"), std::invalid_argument);
  EXPECT_THROW(emit_svg({SweepRecord{}}, "lambda", "gap"), std::invalid_argument);
}

TEST(Cache, StoreAndLoad) {
  const auto dir = temp_dir("cache");
  const SweepCache cache(dir);
  const auto spec = ChainSpec::chain(8, 0.3, Boundary::periodic);
  EXPECT_FALSE(cache.load(spec, 1).has_value());
  SweepRecord r;
  r.energy = -8.123456789012345;
  r.geo_ent = 3.0000000000000004;
  cache.store(spec, 1, r);
  const auto back = cache.load(spec, 1);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(back->energy, r.energy);
  EXPECT_EQ(back->geo_ent, r.geo_ent);
  EXPECT_EQ(back->lambda, 0.3);
  EXPECT_FALSE(cache.load(spec, 2).has_value());
  EXPECT_NE(SweepCache::key(spec, 1), SweepCache::key(spec.with_lambda(0.30000000000000004), 1));
  EXPECT_FALSE(SweepCache(dir, false).load(spec, 1).has_value());
}

TEST(RunSweep, IndependentOfWorkerCountAndCache) {
  const auto dir = temp_dir("pool");
  const SweepCache cache(dir);
  const auto spec = ChainSpec::chain(6, 0.0, Boundary::periodic);
  const auto grid = parse_lambda_range("0:1:0.25");
  const auto a = to_csv(run_sweep(spec, grid, {}, 1, nullptr));
  const auto b = to_csv(run_sweep(spec, grid, {}, 3, &cache));
  int hits = 0;
  const auto c = to_csv(run_sweep(spec, grid, {}, 2, &cache, &hits));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_EQ(hits, 5);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"--bogus"}), 1);
  EXPECT_EQ(run_cli({"sweep"}), 1);  // --n is required
  EXPECT_EQ(run_cli({"sweep", "--n", "8", "--lambda", "bad"}), 1);
  EXPECT_EQ(run_cli({"sweep", "--n", "18", "--lambda", "0.5", "--out", temp_dir("cap").string()}), 3);
  EXPECT_EQ(run_cli({"duality-check", "--n", "12"}), 3);
  EXPECT_EQ(run_cli({"duality-check", "--n", "6", "--lambda", "0.7", "--reading", "printed"}), 2);
  std::string out;
  EXPECT_EQ(run_cli({"duality-check", "--n", "6", "--lambda", "0.7"}, &out), 0);
  const auto j = nlohmann::json::parse(out);
  EXPECT_LE(j.at("max_entry_deviation").get<double>(), 1e-9);
}

TEST(Cli, UnknownFlagWritesNothing) {
  const auto dir = temp_dir("unknown");
  EXPECT_EQ(run_cli({"sweep", "--n", "6", "--out", dir.string(), "--frobnicate"}), 1);
  EXPECT_TRUE(std::filesystem::is_empty(dir));
}

TEST(Cli, SweepWritesCsvSvgAndManifest) {
  const auto dir = temp_dir("sweep");
  ASSERT_EQ(run_cli({"sweep", "--n", "6,8", "--lambda", "0:1:0.5", "--out", dir.string(), "--no-cache"}), 0);
  for (const char* f : {"sweep_N6_periodic.csv", "sweep_N8_periodic.csv", "manifest.json",
                        "sweep_periodic_lambda_geo_ent_per_site.svg", "sweep_periodic_lambda_geo_ent_deriv.svg"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  std::ifstream m(dir / "manifest.json");
  const auto j = nlohmann::json::parse(m);
  EXPECT_EQ(j.at("files").size(), 4u);
  EXPECT_EQ(j.at("conventions").at("mu_y_phase"), "+i");
  std::ifstream csv(dir / "sweep_N8_periodic.csv");
  const auto rows = parse_csv(csv);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[0].geo_ent_per_site, 0.5, 1e-12);
}
