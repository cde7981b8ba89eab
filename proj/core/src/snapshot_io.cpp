#include "aodep/snapshot_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace aodep {

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex_double(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size())
    throw ParameterError("not a floating-point value: '" + text + "'");
  return v;
}

void write_snapshot_header(std::ostream& out, int d) {
  out << "# step,time,body,index";
  for (int k = 0; k < d; ++k) out << ",x" << k;
  out << '\n';
}

namespace {

void write_bodies(std::ostream& out, const Snapshot& snap, const PointSet& pts, char tag) {
  const std::string prefix =
      std::to_string(snap.step) + ',' + hex_double(snap.time) + ',' + tag + ',';
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out << prefix << i;
    for (double x : pts[i]) out << ',' << hex_double(x);
    out << '\n';
  }
}

}  // namespace

void write_snapshot(std::ostream& out, const Snapshot& snap) {
  write_bodies(out, snap, snap.cfg.spheres, 'S');
  write_bodies(out, snap, snap.cfg.particles, 'P');
}

std::vector<Snapshot> read_snapshots(std::istream& in) {
  std::vector<Snapshot> out;
  std::string line;
  std::size_t line_no = 0;
  int dim = 0;
  auto fail = [&](const std::string& what) {
    throw ParameterError("snapshot line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() < 5) fail("expected step,time,body,index and coordinates");
    const int d = static_cast<int>(fields.size() - 4);
    if (dim == 0) dim = d;
    if (d != dim) fail("dimension changes from " + std::to_string(dim) + " to " + std::to_string(d));

    std::size_t step = 0, index = 0;
    double time = 0.0;
    std::vector<double> x(static_cast<std::size_t>(d));
    try {
      std::size_t used = 0;
      step = std::stoull(fields[0], &used);
      if (used != fields[0].size()) fail("bad step");
      index = std::stoull(fields[3], &used);
      if (used != fields[3].size()) fail("bad index");
      time = parse_hex_double(fields[1]);
      for (int k = 0; k < d; ++k) x[static_cast<std::size_t>(k)] = parse_hex_double(fields[4 + static_cast<std::size_t>(k)]);
    } catch (const ParameterError& e) {
      fail(e.what());
    } catch (const std::exception&) {
      fail("malformed number");
    }
    if (fields[2] != "S" && fields[2] != "P") fail("body type must be S or P");

    if (out.empty() || out.back().step != step) {
      Snapshot& s = out.emplace_back();
      s.step = step;
      s.time = time;
      s.cfg = Configuration(PointSet(d), PointSet(d));
    }
    PointSet& target = fields[2] == "S" ? out.back().cfg.spheres : out.back().cfg.particles;
    if (index != target.size()) fail("body index out of sequence");
    target.push_back(x);
  }
  return out;
}

std::vector<Snapshot> read_snapshots_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open snapshot file '" + path + "'");
  return read_snapshots(in);
}

void write_local_times(std::ostream& out, std::size_t step, const SymmetricMatrix& spheres,
                       const RectMatrix& particles) {
  out << "# step " << step << "\n# kind,i,j,value\n";
  for (std::size_t i = 0; i < spheres.size(); ++i)
    for (std::size_t j = i + 1; j < spheres.size(); ++j)
      if (spheres(i, j) != 0.0) out << "SS," << i << ',' << j << ',' << hex_double(spheres(i, j)) << '\n';
  for (std::size_t i = 0; i < particles.rows(); ++i)
    for (std::size_t k = 0; k < particles.cols(); ++k)
      if (particles(i, k) != 0.0)
        out << "SP," << i << ',' << k << ',' << hex_double(particles(i, k)) << '\n';
}

void write_metadata(std::ostream& out,
                    const std::vector<std::pair<std::string, MetadataSection>>& sections) {
  bool first = true;
  for (const auto& [name, entries] : sections) {
    if (!first) out << '\n';
    first = false;
    out << '[' << name << "]\n";
    for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
  }
}

}  // namespace aodep
