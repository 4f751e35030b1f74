#include "qrsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qrsim {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no platform newline translation
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("bad numeric field '" + s + "' in " + context);
  }
}

nlohmann::ordered_json kv_to_json(const std::map<std::string, std::string>& kv) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // Shortest representation that parses back exactly. strtod instead of
  // std::stod: the latter throws on subnormals with glibc.
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

uint64_t fnv1a64(const std::string& data) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string config_hash(const ConfigKv& kv) {
  std::string canon;
  for (const auto& [k, v] : kv) {
    canon += k;
    canon += '=';
    canon += v;
    canon += '\n';
  }
  return hex64(fnv1a64(canon));
}

void GridData::validate() const {
  if (values.rows() != Eigen::Index(row_values.size()) ||
      values.cols() != Eigen::Index(col_values.size()))
    throw std::logic_error("GridData: value shape does not match sweep axes");
}

void write_grid_csv(const std::string& path, const GridData& grid) {
  grid.validate();
  auto out = open_out(path);
  out << grid.row_label << '\\' << grid.col_label;
  for (double c : grid.col_values) out << ',' << format_double(c);
  out << '\n';
  for (size_t i = 0; i < grid.row_values.size(); ++i) {
    out << format_double(grid.row_values[i]);
    for (size_t j = 0; j < grid.col_values.size(); ++j)
      out << ',' << format_double(grid.values(i, j));
    out << '\n';
  }
}

GridData read_grid_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty grid file '" + path + "'");
  auto header = split_csv_line(line);
  GridData grid;
  const auto slash = header[0].find('\\');
  grid.row_label = slash == std::string::npos ? header[0] : header[0].substr(0, slash);
  grid.col_label = slash == std::string::npos ? "col" : header[0].substr(slash + 1);
  for (size_t j = 1; j < header.size(); ++j)
    grid.col_values.push_back(parse_double(header[j], path));

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != grid.col_values.size() + 1)
      throw std::runtime_error("ragged row in '" + path + "'");
    grid.row_values.push_back(parse_double(fields[0], path));
    rows.emplace_back();
    for (size_t j = 1; j < fields.size(); ++j)
      rows.back().push_back(parse_double(fields[j], path));
  }
  grid.values.resize(rows.size(), grid.col_values.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < grid.col_values.size(); ++j) grid.values(i, j) = rows[i][j];
  return grid;
}

void write_table_csv(const std::string& path, const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size())
    throw std::logic_error("write_table_csv: name/column count mismatch");
  for (const auto& c : columns)
    if (c.size() != columns[0].size())
      throw std::logic_error("write_table_csv: ragged columns");
  auto out = open_out(path);
  for (size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  out << '\n';
  const size_t n = columns.empty() ? 0 : columns[0].size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < columns.size(); ++j)
      out << (j ? "," : "") << format_double(columns[j][i]);
    out << '\n';
  }
}

std::vector<std::vector<double>> read_table_csv(const std::string& path,
                                                std::vector<std::string>* names) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty table file '" + path + "'");
  const auto header = split_csv_line(line);
  if (names) *names = header;
  std::vector<std::vector<double>> cols(header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != cols.size()) throw std::runtime_error("ragged row in '" + path + "'");
    for (size_t j = 0; j < fields.size(); ++j) cols[j].push_back(parse_double(fields[j], path));
  }
  return cols;
}

void write_sidecar_json(const std::string& path, const ConfigKv& config,
                        const std::map<std::string, std::string>& units,
                        const nlohmann::ordered_json& extra) {
  nlohmann::ordered_json j;
  j["generator"] = "qrsim";
  j["code_version"] = kCodeVersion;
  j["config_hash"] = config_hash(config);
  j["config"] = kv_to_json(config);
  j["units"] = kv_to_json(units);
  for (const auto& [k, v] : extra.items()) j[k] = v;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_density_json(const std::string& path, const Mat& rho,
                        const nlohmann::ordered_json& meta) {
  if (rho.rows() != rho.cols()) throw std::logic_error("write_density_json: matrix not square");
  nlohmann::ordered_json j;
  j["dim"] = int(rho.rows());
  auto entries = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < rho.rows(); ++r)
    for (Eigen::Index c = 0; c < rho.cols(); ++c)
      entries.push_back({rho(r, c).real(), rho(r, c).imag()});
  j["rho_row_major_re_im"] = std::move(entries);
  for (const auto& [k, v] : meta.items()) j[k] = v;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

Mat read_density_json(const std::string& path) {
  auto in = open_in(path);
  nlohmann::json j;
  in >> j;
  const int d = j.at("dim").get<int>();
  const auto& entries = j.at("rho_row_major_re_im");
  if (int(entries.size()) != d * d)
    throw std::runtime_error("density record in '" + path + "' has wrong entry count");
  Mat rho(d, d);
  int idx = 0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c, ++idx)
      rho(r, c) = cxd(entries[idx][0].get<double>(), entries[idx][1].get<double>());
  return rho;
}

void write_trace_csv(const std::string& path, const KernelTrace& trace) {
  trace.validate();
  auto out = open_out(path);
  out << "t_ns,value\n";
  for (size_t k = 0; k < trace.samples.size(); ++k)
    out << format_double(k * trace.dt) << ',' << format_double(trace.samples[k]) << '\n';
}

KernelTrace read_trace_csv(const std::string& path, KernelTrace::Kind kind) {
  auto in = open_in(path);
  std::string line;
  KernelTrace trace;
  trace.kind = kind;
  std::vector<double> times;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (first) {
      first = false;
      if (fields.size() >= 1 && fields[0] == "t_ns") continue;  // optional header
    }
    if (fields.size() != 2) throw std::runtime_error("trace row in '" + path + "' needs 2 fields");
    times.push_back(parse_double(fields[0], path));
    trace.samples.push_back(parse_double(fields[1], path));
  }
  if (trace.samples.size() < 2)
    throw std::runtime_error("trace in '" + path + "' needs at least 2 samples");
  trace.dt = times[1] - times[0];
  for (size_t k = 1; k + 1 < times.size(); ++k)
    if (std::abs(times[k + 1] - times[k] - trace.dt) > 1e-9 * std::max(1.0, trace.dt))
      throw std::runtime_error("trace in '" + path + "' is not uniformly sampled");
  trace.validate();
  return trace;
}

void write_kernel_json(const std::string& path, const StepForm& form, double dt, int n,
                       const nlohmann::ordered_json& meta) {
  nlohmann::ordered_json j;
  j["form"] = form.name();
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  switch (form.kind) {
    case StepForm::Kind::linear_ramp: params["a"] = form.a; break;
    case StepForm::Kind::exp_approach:
      params["alpha"] = form.alpha;
      params["tau"] = form.tau;
      break;
    case StepForm::Kind::quadratic:
      params["c1"] = form.c1;
      params["c2"] = form.c2;
      break;
    case StepForm::Kind::skin_effect: params["alpha_db"] = form.alpha_db; break;
  }
  j["params"] = std::move(params);
  j["dt"] = dt;
  j["n"] = n;
  for (const auto& [k, v] : meta.items()) j[k] = v;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

StepForm read_kernel_json(const std::string& path, double* dt, int* n) {
  auto in = open_in(path);
  nlohmann::json j;
  in >> j;
  StepForm form;
  form.kind = step_form_kind_from_name(j.at("form").get<std::string>());
  const auto& p = j.at("params");
  switch (form.kind) {
    case StepForm::Kind::linear_ramp: form.a = p.at("a").get<double>(); break;
    case StepForm::Kind::exp_approach:
      form.alpha = p.at("alpha").get<double>();
      form.tau = p.at("tau").get<double>();
      break;
    case StepForm::Kind::quadratic:
      form.c1 = p.at("c1").get<double>();
      form.c2 = p.at("c2").get<double>();
      break;
    case StepForm::Kind::skin_effect: form.alpha_db = p.at("alpha_db").get<double>(); break;
  }
  if (dt) *dt = j.at("dt").get<double>();
  if (n) *n = j.at("n").get<int>();
  return form;
}

void write_wigner_csv(const std::string& path, const std::vector<WignerPoint>& points) {
  auto out = open_out(path);
  out << "re_alpha,im_alpha,value,shots\n";
  for (const auto& pt : points)
    out << format_double(pt.alpha.real()) << ',' << format_double(pt.alpha.imag()) << ','
        << format_double(pt.value) << ',' << pt.shots << '\n';
}

std::vector<WignerPoint> read_wigner_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  std::vector<WignerPoint> points;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (first) {
      first = false;
      if (fields[0] == "re_alpha") continue;
    }
    if (fields.size() != 3 && fields.size() != 4)
      throw std::runtime_error("Wigner row in '" + path + "' needs 3 or 4 fields");
    WignerPoint pt;
    pt.alpha = cxd(parse_double(fields[0], path), parse_double(fields[1], path));
    pt.value = parse_double(fields[2], path);
    pt.shots = fields.size() == 4 ? int(parse_double(fields[3], path)) : 0;
    points.push_back(pt);
  }
  if (points.empty()) throw std::runtime_error("no Wigner samples in '" + path + "'");
  return points;
}

}  // namespace qrsim
