#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "tas/io.hpp"
#include "tas/sampling.hpp"

using namespace tas;

TEST(PatternCsv, RoundTripWithLabels) {
  const TasParameters params(0.7, 0.3, ClusterDistribution::gaussian(2, 0.8));
  RandomSource rng(3);
  const Window w = Window::cube(-5.0, 5.0, 2);
  const PointPattern p = simulate_tas(params, w, rng).pattern;
  ASSERT_GT(p.size(), 10u);
  const std::string text = write_pattern(p);
  EXPECT_EQ(text.substr(0, text.find('\n')), "x,y,cluster");
  const PointPattern q = read_pattern(text, w);
  ASSERT_EQ(q.size(), p.size());
  EXPECT_EQ(q.labels(), p.labels());
  for (std::size_t i = 0; i < p.coords().size(); ++i) EXPECT_NEAR(q.coords()[i], p.coords()[i], 1e-11);
  EXPECT_EQ(write_pattern(q), text);
}

TEST(PatternCsv, ErrorsCarryLineNumbers) {
  const Window w = Window::interval(0.0, 1.0);
  try {
    read_pattern("x\n0.1\n0.2\nabc\n", w);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  try {
    read_pattern("x,cluster\n0.1,a\n0.2\n", w);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(read_pattern("q\n0.1\n", w), ParseError);
  EXPECT_THROW(read_pattern("", w), ParseError);
  try {
    read_pattern("x\n0.5\n\n1.5\n", w);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
  EXPECT_THROW(read_pattern("x,y\n0.1,0.2\n", w), ValidationError);
}

TEST(PatternCsv, Cloud) {
  std::istringstream in("x,y\n1,2\n-1,-2\n");
  const auto c = read_cloud(in);
  EXPECT_EQ(c.dim(), 2u);
  EXPECT_EQ(std::get<EmpiricalCloud>(c.variant()).coords, (std::vector<double>{1, 2, -1, -2}));
}

TEST(Json, ParameterRoundTrips) {
  for (const auto& mu0 : {ClusterDistribution::uniform(0.5), ClusterDistribution::gaussian(3, 1.25),
                          ClusterDistribution::empirical(2, {0.0, 1.0, 2.0, -3.5})}) {
    const TasParameters p(0.45, 0.02, mu0);
    const TasParameters q = params_from_json(json::parse(to_json(p).dump()));
    EXPECT_EQ(q.alpha, p.alpha);
    EXPECT_EQ(q.lambda, p.lambda);
    EXPECT_EQ(to_json(q.mu0), to_json(p.mu0));
  }
  const Window w({-1.0, 2.0}, {3.0, 4.5});
  EXPECT_EQ(window_from_json(to_json(w)), w);
  EXPECT_THROW(window_from_json(json{{"lower", {1.0}}}), ValidationError);
}

TEST(Json, FitResultRoundTrip) {
  FitResult r;
  r.alpha_hat = 0.61;
  r.lambda_hat = 0.4;
  r.method = "pgf";
  r.objective = "log-profiled-ls";
  r.iterations = 12;
  r.converged = true;
  r.observations = 9;
  r.warnings = {"w"};
  const FitResult s = fit_result_from_json(to_json(r));
  EXPECT_EQ(to_json(s), to_json(r));
}

TEST(Curve, RoundTrip) {
  const ContactCurve c({0.5, 1.0, 2.0}, {0.9, 0.7, 0.25});
  std::istringstream in(write_curve(c));
  const ContactCurve d = read_curve(in);
  EXPECT_EQ(d.radii(), c.radii());
  EXPECT_EQ(d.values(), c.values());
}

TEST(Files, AtomicWriteAndSidecars) {
  const auto dir = std::filesystem::temp_directory_path() / "tas_io_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_text_file(dir / "a.txt", "hello\n");
  EXPECT_EQ(read_text_file(dir / "a.txt"), "hello\n");
  EXPECT_THROW(read_text_file(dir / "missing.txt"), IoError);
  EXPECT_THROW(write_text_file(dir / "no" / "such" / "b.txt", "x"), IoError);
  EXPECT_EQ(window_sidecar(dir / "p.csv").filename(), "p.window.json");
  EXPECT_EQ(metadata_sidecar(dir / "p.csv").filename(), "p.meta.json");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1u);
  std::filesystem::remove_all(dir);
}

TEST(PatternCsv, WorkedExamples) {
  const Window w = Window::interval(-1.0, 1.0);
  EXPECT_EQ(read_pattern("x\n0.5\n-0.3\n", w).size(), 2u);
  const PointPattern lab = read_pattern("x,cluster\n0.1,1\n0.2,1\n0.3,2\n", w);
  EXPECT_EQ(lab.clusters().size(), 2u);
  EXPECT_THROW(read_pattern("x\n2.0\n", w), ValidationError);
  EXPECT_EQ(write_pattern(PointPattern(w)), "x\n");
  EXPECT_EQ(write_pattern(PointPattern(w, {0.25, -0.5}, std::vector<std::string>{"a", "b"})),
            "x,cluster\n0.25,a\n-0.5,b\n");
}

TEST(PatternCsv, ThousandPointRoundTrip) {
  RandomSource rng(30);
  const Window w = Window::cube(-2.0, 2.0, 3);
  std::vector<double> x(3000);
  for (double& v : x) v = std::stod(format_coord(rng.uniform(-2.0, 2.0)));
  const PointPattern p(w, x);
  EXPECT_EQ(read_pattern(write_pattern(p), w).coords(), p.coords());
}
