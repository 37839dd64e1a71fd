#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "rydlgt/dynamics.hpp"
#include "rydlgt/error.hpp"
#include "rydlgt/io.hpp"
#include "rydlgt/svg.hpp"
#include "test_util.hpp"

using namespace rydlgt;
using rydlgt::testing::A;
using rydlgt::testing::B;
using rydlgt::testing::make_geometry;

TEST(Io, GeometryRoundTrip) {
  const auto g = make_geometry(5, 3, {A(1, 1), B(3, 1)}, {{0, 0}, {4, 2}});
  const auto j = io::geometry_to_json(*g);
  EXPECT_EQ(j.at("atom_count").get<std::size_t>(), 25U);
  const Geometry back = io::geometry_from_json(j);
  ASSERT_EQ(back.size(), g->size());
  for (std::size_t k = 0; k < g->size(); ++k) EXPECT_EQ(back.atoms()[k].id, g->atoms()[k].id);
  ASSERT_EQ(back.defects().size(), 2U);

  auto broken = j;
  broken["atoms"].erase(0);
  EXPECT_THROW(io::geometry_from_json(broken), ConfigError);
  auto bad_site = j;
  bad_site["defects"][0]["sublattice"] = "C";
  EXPECT_THROW(io::geometry_from_json(bad_site), ConfigError);
  EXPECT_THROW(io::geometry_from_json(io::json::object()), ConfigError);
}

TEST(Io, ScheduleRoundTripInMegahertz) {
  const DriveSchedule s = sweep_schedule(4, units::kOmegaMax, 2.3 * units::kOmegaMax);
  const auto j = io::schedule_to_json(s);
  EXPECT_NEAR(j.at("omega")[1][1].get<double>(), 2.5, 1e-12);
  EXPECT_NEAR(j.at("delta")[0][1].get<double>(), -6.25, 1e-12);
  const DriveSchedule back = io::schedule_from_json(j);
  EXPECT_EQ(back.t_end, s.t_end);
  for (double t = 0.0; t <= s.t_end; t += 0.1) {
    EXPECT_NEAR(back.at(t).omega, s.at(t).omega, 1e-12);
    EXPECT_NEAR(back.at(t).delta, s.at(t).delta, 1e-12);
  }
  auto bad = j;
  bad["omega"][0] = {0.0};
  EXPECT_THROW(io::schedule_from_json(bad), ConfigError);
}

TEST(Io, ShotsRoundTripAndLineErrors) {
  ShotSet shots;
  shots.atom_count = 5;
  shots.seed = 77;
  shots.geometry_file = "geom.json";
  shots.shots = {0b00101, 0b10000, 0};
  std::stringstream text;
  io::write_shots(text, shots);
  const ShotSet back = io::read_shots(text, 5);
  EXPECT_EQ(back.shots, shots.shots);
  EXPECT_EQ(back.seed, 77U);
  EXPECT_EQ(back.geometry_file, "geom.json");
  EXPECT_EQ(back.provenance, Provenance::File);
  // Atom 0 is the leftmost character.
  std::stringstream first("# seed: 1\n10000\n");
  EXPECT_EQ(io::read_shots(first, 5).shots.front(), Bitstring{1});

  std::stringstream bad("# seed: 1\n10100\n1010\n");
  try {
    io::read_shots(bad, 5);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  std::stringstream bad_char("10120\n");
  EXPECT_THROW(io::read_shots(bad_char, 5), ConfigError);
}

TEST(Io, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int k = 0; k < 2000; ++k) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(std::strtod(io::format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(2.5), "2.5");
}

TEST(Io, ScanPointCacheLineRoundTrips) {
  ScanPoint p{3, 1.2, 0.1 + 0.2, -7.125, {{"p_s", 4, 10, 0.4, 0.25, 0.56}, {"broken_b", 0, 0, 1.0 / 3.0, 0, 0}}};
  const ScanPoint q = io::point_from_line(io::point_to_line(p));
  EXPECT_EQ(q.index, 3U);
  EXPECT_EQ(q.y, p.y);
  EXPECT_EQ(q.energy, p.energy);
  ASSERT_EQ(q.rows.size(), 2U);
  EXPECT_EQ(q.rows[1].p, 1.0 / 3.0);
  EXPECT_EQ(q.rows[0].ci_high, 0.56);
  EXPECT_THROW(io::point_from_line("{\"index\": 1}"), ConfigError);
  EXPECT_THROW(io::point_from_line("not json"), ConfigError);
}

TEST(Io, CsvLayouts) {
  std::stringstream rows;
  io::write_probability_csv(rows, {{"p_s", 3, 10, 0.3, 0.2, 0.4}});
  EXPECT_EQ(rows.str(), "label,k,n,p,ci_low,ci_high\np_s,3,10,0.3,0.2,0.4\n");

  ScanResult scan;
  scan.x_name = "rb";
  scan.y_name = "delta_over_omega";
  scan.x = {1.2};
  scan.y = {2.3};
  scan.points = {ScanPoint{0, 1.2, 2.3, -1.5, {{"p_s", 0, 0, 0.7, 0, 0}, {"broken_b", 0, 0, 0.1, 0, 0}}}};
  std::stringstream csv;
  io::write_scan_csv(csv, scan);
  EXPECT_EQ(csv.str(), "rb,delta_over_omega,energy_over_omega,p_s,broken_b\n1.2,2.3,-1.5,0.7,0.1\n");
}

TEST(Io, GaugeAndFitJson) {
  const auto g = make_geometry(5, 3, {A(1, 1), B(3, 1)});
  const GaugeConfig cfg = encode(enumerate_strings(*g).get("string_1").bits, *g);
  const auto j = io::gauge_to_json(cfg, *g);
  EXPECT_EQ(j.at("links").size(), g->size());
  EXPECT_EQ(j.at("sites").size(), g->vertices().size());
  int positive = 0;
  for (const auto& l : j.at("links")) positive += l.at("sz").get<double>() > 0 ? 1 : 0;
  EXPECT_EQ(positive, 3);

  GaussianFit fit;
  fit.center = 1.1;
  fit.note = "ok";
  const auto f = io::fit_to_json(fit);
  EXPECT_EQ(f.at("center").get<double>(), 1.1);
  EXPECT_EQ(f.at("note").get<std::string>(), "ok");
}

TEST(Io, Files) {
  const auto dir = std::filesystem::temp_directory_path() / "rydlgt_io_test";
  std::filesystem::remove_all(dir);
  io::write_text_file(dir / "sub" / "x.json", "{\"a\": 1}");
  EXPECT_EQ(io::read_json_file(dir / "sub" / "x.json").at("a").get<int>(), 1);
  io::write_text_file(dir / "bad.json", "{");
  EXPECT_THROW(io::read_json_file(dir / "bad.json"), ConfigError);
  EXPECT_THROW(io::read_json_file(dir / "missing.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

namespace {

std::size_t count(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (auto at = text.find(what); at != std::string::npos; at = text.find(what, at + 1)) ++n;
  return n;
}

}  // namespace

TEST(Svg, LatticeDrawsEveryAtom) {
  const auto g = make_geometry(5, 3, {A(1, 1), B(3, 1)});
  const StringSet set = enumerate_strings(*g);
  const std::string plain = svg::lattice(*g);
  EXPECT_EQ(plain.rfind("<svg", 0), 0U);
  EXPECT_NE(plain.find("</svg>"), std::string::npos);
  EXPECT_GE(count(plain, "<circle"), g->size());
  const Bitstring s = set.get("string_1").bits;
  const std::string overlay = svg::lattice(*g, {s, encode(s, *g)});
  EXPECT_GT(overlay.size(), plain.size());
}

TEST(Svg, PlotsAreWellFormed) {
  ScanResult scan;
  scan.x_name = "rb";
  scan.y_name = "delta_over_omega";
  scan.x = {1.0, 1.2};
  scan.y = {2.0, 3.0, 4.0};
  for (std::size_t k = 0; k < 6; ++k) scan.points.push_back({k, scan.x[k / 3], scan.y[k % 3], 0.0, {{"p_s", 0, 0, 0.1 * k, 0, 0}}});
  const std::string map = svg::heatmap(scan, "p_s", "string probability");
  EXPECT_EQ(map.rfind("<svg", 0), 0U);
  EXPECT_GE(count(map, "<rect"), 6U);
  EXPECT_NE(map.find("string probability"), std::string::npos);

  const std::string plot = svg::line_plot({0.0, 0.5, 1.0}, {{"p_b", {0.1, 0.4, 0.2}}, {"p_c", {0.0, 0.1, 0.3}}},
                                          "delta_0 / Omega", "resonance", {{0.946, "classical"}});
  EXPECT_EQ(count(plot, "<polyline"), 2U);
  EXPECT_NE(plot.find("classical"), std::string::npos);
  EXPECT_THROW(svg::line_plot({0.0, 1.0}, {{"bad", {0.1}}}, "x", "t"), ConfigError);
}
