#include "rydlgt/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rydlgt/error.hpp"
#include "rydlgt/units.hpp"

namespace rydlgt::io {

namespace {

json site_to_json(const Site& s) {
  return {{"cell", {s.cell.i, s.cell.j}}, {"sublattice", s.sub == Sublattice::A ? "A" : "B"}};
}

Site site_from_json(const json& j) {
  const auto& cell = j.at("cell");
  if (!cell.is_array() || cell.size() != 2) throw ConfigError("site cell must be a pair [i, j]");
  const std::string sub = j.at("sublattice").get<std::string>();
  if (sub != "A" && sub != "B") throw ConfigError("sublattice must be \"A\" or \"B\", got \"" + sub + "\"");
  return Site{{cell[0].get<int>(), cell[1].get<int>()}, sub == "A" ? Sublattice::A : Sublattice::B};
}

const char* kind_name(LinkKind k) {
  switch (k) {
    case LinkKind::Intra: return "intra";
    case LinkKind::Axis0: return "axis0";
    case LinkKind::Axis1: return "axis1";
  }
  return "?";
}

// Wraps nlohmann exceptions so callers see ConfigError.
template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json geometry_to_json(const Geometry& geom) {
  const auto& spec = geom.spec();
  json trimmed = json::array();
  for (const auto& c : spec.trimmed_cells) trimmed.push_back({c.i, c.j});
  json defects = json::array();
  for (const auto& d : geom.defects()) {
    json s = site_to_json(d.site);
    s["sign"] = d.sign;
    defects.push_back(s);
  }
  json atoms = json::array();
  for (std::size_t k = 0; k < geom.size(); ++k) {
    const auto& a = geom.atoms()[k];
    atoms.push_back({{"index", k},
                     {"lattice_id", a.id},
                     {"x", a.position.x},
                     {"y", a.position.y},
                     {"s", a.parity()},
                     {"kind", kind_name(a.kind)},
                     {"from", site_to_json(a.from)},
                     {"to", site_to_json(a.to)}});
  }
  return {{"spec", {{"L0", spec.L0}, {"L1", spec.L1}, {"a_um", spec.a}, {"trimmed_cells", trimmed}}},
          {"defects", defects},
          {"atom_count", geom.size()},
          {"atoms", atoms}};
}

Geometry geometry_from_json(const json& j) {
  return guarded("geometry", [&] {
    const auto& s = j.at("spec");
    LatticeSpec spec;
    spec.L0 = s.at("L0").get<int>();
    spec.L1 = s.at("L1").get<int>();
    spec.a = s.value("a_um", 1.0);
    for (const auto& c : s.value("trimmed_cells", json::array())) spec.trimmed_cells.push_back({c.at(0), c.at(1)});
    std::vector<Site> sites;
    for (const auto& d : j.value("defects", json::array())) sites.push_back(site_from_json(d));
    Geometry g = Geometry::build(spec).with_charges(sites);
    if (j.contains("atoms")) {
      const auto& atoms = j.at("atoms");
      if (atoms.size() != g.size()) {
        throw ConfigError("geometry file lists " + std::to_string(atoms.size()) + " atoms, rebuilt lattice has " +
                          std::to_string(g.size()));
      }
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (atoms[k].at("lattice_id").get<int>() != g.atoms()[k].id) {
          throw ConfigError("geometry file atom " + std::to_string(k) + " does not match the rebuilt lattice");
        }
      }
    }
    return g;
  });
}

json schedule_to_json(const DriveSchedule& s) {
  const auto channel = [](const Waveform& w, bool frequency) {
    json pts = json::array();
    for (const auto& p : w.points()) pts.push_back({p.t, frequency ? units::to_mhz(p.value) : p.value});
    return pts;
  };
  return {{"t_end_us", s.t_end},
          {"omega", channel(s.omega, true)},
          {"delta", channel(s.delta, true)},
          {"phi", channel(s.phi, false)},
          {"delta_local", channel(s.delta_local, true)},
          {"pattern", s.pattern}};
}

DriveSchedule schedule_from_json(const json& j) {
  return guarded("schedule", [&] {
    const auto channel = [&](const char* name, bool frequency) {
      std::vector<Breakpoint> pts;
      for (const auto& p : j.at(name)) {
        if (!p.is_array() || p.size() != 2) throw ConfigError(std::string("channel ") + name + " needs [t, value] pairs");
        const double v = p[1].get<double>();
        pts.push_back({p[0].get<double>(), frequency ? units::from_mhz(v) : v});
      }
      return Waveform(std::move(pts));
    };
    DriveSchedule s;
    s.omega = channel("omega", true);
    s.delta = channel("delta", true);
    s.phi = j.contains("phi") ? channel("phi", false) : Waveform::constant(0.0, 0.0);
    s.delta_local = j.contains("delta_local") ? channel("delta_local", true) : Waveform::constant(0.0, 0.0);
    s.pattern = j.value("pattern", std::vector<double>{});
    s.t_end = j.contains("t_end_us") ? j.at("t_end_us").get<double>() : s.omega.end();
    return s;
  });
}

json gauge_to_json(const GaugeConfig& cfg, const Geometry& geom) {
  json links = json::array();
  for (std::size_t k = 0; k < geom.size(); ++k) {
    links.push_back({{"index", k}, {"lattice_id", geom.atoms()[k].id}, {"sz", cfg.sz[k]}});
  }
  json sites = json::array();
  for (std::size_t v = 0; v < geom.vertices().size(); ++v) {
    json s = site_to_json(geom.vertices()[v]);
    s["Q"] = cfg.charge[v];
    s["q_static"] = cfg.static_charge[v];
    s["background"] = cfg.background[v];
    sites.push_back(s);
  }
  return {{"links", links}, {"sites", sites}, {"hardcore", cfg.hardcore}};
}

json fit_to_json(const GaussianFit& f) {
  return {{"center", f.center},       {"center_err", f.center_err},
          {"width", f.width},         {"width_err", f.width_err},
          {"amplitude", f.amplitude}, {"amplitude_err", f.amplitude_err},
          {"offset", f.offset},       {"offset_err", f.offset_err},
          {"rss", f.rss},             {"points", f.points},
          {"converged", f.converged}, {"reliable", f.reliable},
          {"note", f.note}};
}

void write_shots(std::ostream& out, const ShotSet& shots) {
  out << "# geometry: " << shots.geometry_file << "\n";
  out << "# seed: " << shots.seed << "\n";
  for (Bitstring s : shots.shots) out << format_bitstring(s, shots.atom_count) << "\n";
}

ShotSet read_shots(std::istream& in, std::size_t atom_count) {
  ShotSet set;
  set.atom_count = atom_count;
  set.provenance = Provenance::File;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(1, colon - 1);
      std::string value = line.substr(colon + 1);
      const auto trim = [](std::string& t) {
        t.erase(0, t.find_first_not_of(' '));
        t.erase(t.find_last_not_of(' ') + 1);
      };
      trim(key);
      trim(value);
      if (key == "geometry") set.geometry_file = value;
      if (key == "seed") {
        try {
          set.seed = std::stoull(value);
        } catch (const std::exception&) {
          throw ConfigError("line " + std::to_string(number) + ": invalid seed '" + value + "'");
        }
      }
      continue;
    }
    try {
      set.shots.push_back(parse_bitstring(line, atom_count));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return set;
}

std::string format_double(double v) {
  char buf[32];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_probability_csv(std::ostream& out, const std::vector<ProbabilityRow>& rows) {
  out << "label,k,n,p,ci_low,ci_high\n";
  for (const auto& r : rows) {
    out << r.label << ',' << r.k << ',' << r.n << ',' << format_double(r.p) << ',' << format_double(r.ci_low) << ','
        << format_double(r.ci_high) << "\n";
  }
}

void write_scan_csv(std::ostream& out, const ScanResult& scan) {
  out << scan.x_name << ',' << scan.y_name << ",energy_over_omega";
  if (scan.points.empty()) {
    out << "\n";
    return;
  }
  for (const auto& r : scan.points.front().rows) out << ',' << r.label;
  out << "\n";
  for (const auto& p : scan.points) {
    out << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.energy);
    for (const auto& r : p.rows) out << ',' << format_double(r.p);
    out << "\n";
  }
}

std::string point_to_line(const ScanPoint& p) {
  json rows = json::array();
  for (const auto& r : p.rows) rows.push_back({r.label, r.k, r.n, r.p, r.ci_low, r.ci_high});
  return json{{"index", p.index}, {"x", p.x}, {"y", p.y}, {"energy", p.energy}, {"rows", rows}}.dump();
}

ScanPoint point_from_line(const std::string& line) {
  return guarded("scan cache", [&] {
    const json j = json::parse(line);
    ScanPoint p;
    p.index = j.at("index").get<std::size_t>();
    p.x = j.at("x").get<double>();
    p.y = j.at("y").get<double>();
    p.energy = j.at("energy").get<double>();
    for (const auto& r : j.at("rows")) {
      p.rows.push_back({r.at(0).get<std::string>(), r.at(1).get<std::size_t>(), r.at(2).get<std::size_t>(),
                        r.at(3).get<double>(), r.at(4).get<double>(), r.at(5).get<double>()});
    }
    return p;
  });
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

}  // namespace rydlgt::io
