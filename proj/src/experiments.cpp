// Copyright 2026 The coherence-lab developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cohlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cohlab/catalysis.hpp"
#include "cohlab/channels.hpp"
#include "json.hpp"

namespace cohlab {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t x = seed;
  for (auto& word : state_) word = splitmix64(x);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - uniform() lies in (0, 1], keeping the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Rng Rng::fork(std::uint64_t stream) const {
  std::uint64_t x = seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  return Rng(splitmix64(x));
}

DensityMatrix ginibre_state(std::size_t dim, Rng& rng) {
  if (dim == 0) throw std::invalid_argument("ginibre_state: dim must be positive");
  ComplexMatrix g(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      g.at(i, j) = cx(rng.normal(), rng.normal());
  ComplexMatrix m = g * g.adjoint();
  m *= cx(1.0 / m.trace().real(), 0.0);
  return DensityMatrix(m);
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.samples == 0) throw std::invalid_argument("config: samples must be positive");
  if (cfg.p_values.empty()) throw std::invalid_argument("config: p_values must be nonempty");
  for (double p : cfg.p_values)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("config: p values must lie in [0, 1]");
  if (!(cfg.z_grid.lo >= 0.0 && cfg.z_grid.hi <= 1.0 && cfg.z_grid.lo <= cfg.z_grid.hi))
    throw std::invalid_argument("config: z grid must satisfy 0 <= lo <= hi <= 1");
  if (cfg.z_grid.steps < 2) throw std::invalid_argument("config: z grid needs at least 2 steps");
  if (cfg.format != "csv" && cfg.format != "svg" && cfg.format != "both")
    throw std::invalid_argument("config: format must be csv, svg, or both");
}

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: bad JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  ExperimentConfig cfg;
  try {
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("samples")) cfg.samples = j.at("samples").get<std::size_t>();
    if (j.contains("p_values")) cfg.p_values = j.at("p_values").get<std::vector<double>>();
    if (j.contains("z_grid")) {
      const auto& g = j.at("z_grid");
      if (g.contains("lo")) cfg.z_grid.lo = g.at("lo").get<double>();
      if (g.contains("hi")) cfg.z_grid.hi = g.at("hi").get<double>();
      if (g.contains("steps")) cfg.z_grid.steps = g.at("steps").get<std::size_t>();
    }
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("format")) cfg.format = j.at("format").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: bad field: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << content;
}

std::string output_path(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 770.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 540.0;

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  double map(double v, double pix_lo, double pix_hi) const {
    const double t = (v - lo) / (hi - lo);
    return pix_lo + t * (pix_hi - pix_lo);
  }
  double x(double v) const { return map(v, kLeft, kRight); }
  double y(double v) const { return map(v, kBottom, kTop); }
};

void svg_open(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
  out << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" << title << "</text>\n";
}

void svg_axes(std::ostringstream& out, const Axis& xa, const Axis& ya,
              const std::string& xlabel, const std::string& ylabel) {
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight
      << "\" y2=\"" << kBottom << "\" stroke=\"#000000\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop << "\" stroke=\"#000000\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double tx = xa.lo + k * (xa.hi - xa.lo) / 5.0;
    const double ty = ya.lo + k * (ya.hi - ya.lo) / 5.0;
    const double px = xa.x(tx);
    const double py = ya.y(ty);
    out << "<line x1=\"" << px << "\" y1=\"" << kBottom << "\" x2=\"" << px << "\" y2=\""
        << kBottom + 6 << "\" stroke=\"#000000\"/>\n";
    out << "<text x=\"" << px << "\" y=\"" << kBottom + 22
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << fmt_short(tx) << "</text>\n";
    out << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << py << "\" x2=\"" << kLeft << "\" y2=\""
        << py << "\" stroke=\"#000000\"/>\n";
    out << "<text x=\"" << kLeft - 10 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << fmt_short(ty) << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 45
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << xlabel
      << "</text>\n";
  out << "<text x=\"20\" y=\"" << (kTop + kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "transform=\"rotate(-90 20 "
      << (kTop + kBottom) / 2 << ")\">" << ylabel << "</text>\n";
}

}  // namespace

CurvesResult figure_curves(const ExperimentConfig& cfg) {
  validate_config(cfg);
  CurvesResult res;
  const ZGrid& grid = cfg.z_grid;
  std::vector<double> zs(grid.steps);
  for (std::size_t k = 0; k < grid.steps; ++k)
    zs[k] = grid.lo + static_cast<double>(k) * (grid.hi - grid.lo) /
                          static_cast<double>(grid.steps - 1);

  for (double p : cfg.p_values) {
    Crossover cross;
    cross.p = p;
    for (double z : zs) {
      const QutritExampleResult ex = run_qutrit_example(z, p);
      res.rows.push_back({p, z, ex.cf_direct, ex.cf_processed});
      if (!cross.found && ex.cf_processed > ex.cf_direct + 1e-12) {
        cross.z = z;
        cross.found = true;
      }
    }
    res.crossovers.push_back(cross);
  }

  std::ostringstream csv;
  csv << "p,z,direct,processed\n";
  for (const CurveRow& row : res.rows)
    csv << fmt(row.p) << ',' << fmt(row.z) << ',' << fmt(row.direct) << ','
        << fmt(row.processed) << '\n';
  for (const Crossover& cross : res.crossovers) {
    csv << "# crossover p=" << fmt(cross.p);
    if (cross.found)
      csv << " z=" << fmt(cross.z) << '\n';
    else
      csv << " none\n";
  }
  res.csv = csv.str();

  double ylo = 1e300;
  double yhi = -1e300;
  for (const CurveRow& row : res.rows) {
    ylo = std::min({ylo, row.direct, row.processed});
    yhi = std::max({yhi, row.direct, row.processed});
  }
  const double pad = std::max(1e-3, 0.08 * (yhi - ylo));
  Axis xa{grid.lo, grid.hi};
  Axis ya{ylo - pad, yhi + pad};
  std::ostringstream svg;
  svg_open(svg, "Coherence fraction: direct vs processed");
  svg_axes(svg, xa, ya, "pair-state weight z", "coherence fraction");
  for (std::size_t pi = 0; pi < cfg.p_values.size(); ++pi) {
    const char* color = kPalette[pi % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::ostringstream pts;
    double direct = 0.0;
    for (const CurveRow& row : res.rows)
      if (row.p == cfg.p_values[pi]) {
        pts << xa.x(row.z) << ',' << ya.y(row.processed) << ' ';
        direct = row.direct;
      }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
        << pts.str() << "\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << ya.y(direct) << "\" x2=\"" << kRight
        << "\" y2=\"" << ya.y(direct) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
    svg << "<text x=\"" << kLeft + 12 << "\" y=\"" << kTop + 18 + 18 * pi
        << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"" << color << "\">p = "
        << fmt_short(cfg.p_values[pi]) << " (dashed: direct)</text>\n";
  }
  svg << "</svg>\n";
  res.svg = svg.str();

  if (cfg.format == "csv" || cfg.format == "both") {
    res.csv_path = output_path(cfg, "figure_curves.csv");
    write_text(res.csv_path, res.csv);
  }
  if (cfg.format == "svg" || cfg.format == "both") {
    res.svg_path = output_path(cfg, "figure_curves.svg");
    write_text(res.svg_path, res.svg);
  }
  return res;
}

ViolationResult violation_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const KrausChannel fixture = amplitude_damping_channel(0.4);
  ComplexMatrix sigma_m(2);
  sigma_m.at(0, 0) = 0.3;
  sigma_m.at(1, 1) = 0.7;
  const DensityMatrix sigma(sigma_m);

  ViolationResult res;
  Rng rng(cfg.seed);
  res.records.reserve(cfg.samples);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const DensityMatrix rho = ginibre_state(2, rng);
    res.records.push_back({i, multiplicativity_deviation(fixture, rho, sigma)});
  }

  std::vector<double> sorted;
  sorted.reserve(res.records.size());
  for (const ViolationRecord& rec : res.records) sorted.push_back(rec.deviation);
  std::sort(sorted.begin(), sorted.end());
  res.min = sorted.front();
  res.max = sorted.back();
  const std::size_t n = sorted.size();
  res.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  std::size_t above = 0;
  for (double v : sorted)
    if (v > 1e-3) ++above;
  res.frac_above_1e3 = static_cast<double>(above) / static_cast<double>(n);

  std::ostringstream csv;
  csv << "index,deviation\n";
  for (const ViolationRecord& rec : res.records)
    csv << rec.index << ',' << fmt(rec.deviation) << '\n';
  csv << "# min=" << fmt(res.min) << " median=" << fmt(res.median) << " max=" << fmt(res.max)
      << " frac_above_1e-3=" << fmt(res.frac_above_1e3) << '\n';
  res.csv = csv.str();

  const double log_lo = std::floor(std::log10(std::max(res.min, 1e-300))) - 0.2;
  const double log_hi = std::ceil(std::log10(std::max(res.max, 1e-300))) + 0.2;
  Axis xa{0.0, static_cast<double>(n > 1 ? n - 1 : 1)};
  Axis ya{log_lo, log_hi};
  std::ostringstream svg;
  svg_open(svg, "Multiplicativity deviation per sample");
  svg_axes(svg, xa, ya, "sample index", "log10 deviation");
  for (const ViolationRecord& rec : res.records) {
    const double ly = std::log10(std::max(rec.deviation, 1e-300));
    svg << "<circle cx=\"" << xa.x(static_cast<double>(rec.index)) << "\" cy=\"" << ya.y(ly)
        << "\" r=\"3\" fill=\"#1f77b4\" fill-opacity=\"0.7\"/>\n";
  }
  for (double level : {1e-2, 1e-1}) {
    const double ly = std::log10(level);
    if (ly < ya.lo || ly > ya.hi) continue;
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << ya.y(ly) << "\" x2=\"" << kRight
        << "\" y2=\"" << ya.y(ly)
        << "\" stroke=\"#d62728\" stroke-width=\"1\" stroke-dasharray=\"4 4\"/>\n";
  }
  svg << "</svg>\n";
  res.svg = svg.str();

  if (cfg.format == "csv" || cfg.format == "both") {
    res.csv_path = output_path(cfg, "violation.csv");
    write_text(res.csv_path, res.csv);
  }
  if (cfg.format == "svg" || cfg.format == "both") {
    res.svg_path = output_path(cfg, "violation.svg");
    write_text(res.svg_path, res.svg);
  }
  return res;
}

std::string classify_report(const std::string& channel_path) {
  const KrausChannel channel = load_channel(channel_path);
  const ClassifyResult cls = classify_channel(channel);
  std::ostringstream out;
  out << "dim: " << channel.dim() << '\n';
  out << "kraus operators: " << channel.ops().size() << '\n';
  out << "incoherent (IO): " << (is_io(channel) ? "yes" : "no") << '\n';
  out << "strictly incoherent (SIO): " << (is_sio(channel) ? "yes" : "no") << '\n';
  out << "preserves diagonal states (MIO on basis): "
      << (cls.is_mio_on_basis ? "yes" : "no") << '\n';
  out << "entrywise-scaling form: " << (cls.is_schur ? "yes" : "no") << '\n';
  if (cls.is_schur) {
    out << "permutation:";
    for (std::size_t v : cls.schur.perm) out << ' ' << v;
    out << '\n';
    out << "coefficient matrix:\n";
    const ComplexMatrix& c = cls.schur.coeff;
    for (std::size_t i = 0; i < c.dim(); ++i) {
      out << " ";
      for (std::size_t j = 0; j < c.dim(); ++j) {
        const cx v = c.at(i, j);
        char buf[80];
        std::snprintf(buf, sizeof(buf), " (%.6g%+.6gi)", v.real(), v.imag());
        out << buf;
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace cohlab
