// Deterministic file I/O: CSV grids and tables, JSON sidecars with config
// hashes, density-matrix and kernel records. No timestamps anywhere, so
// identical inputs reproduce byte-identical files.
#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrsim/predistort.hpp"
#include "qrsim/space.hpp"
#include "qrsim/tomo.hpp"

namespace qrsim {

inline constexpr const char* kCodeVersion = "1.0.0";

// Shortest decimal that round-trips a double ("%.17g" trimmed).
std::string format_double(double v);

uint64_t fnv1a64(const std::string& data);
std::string hex64(uint64_t v);

// Flat key-value view of a config; the hash covers every entry.
using ConfigKv = std::map<std::string, std::string>;
std::string config_hash(const ConfigKv& kv);

// 2D sweep result. CSV layout: header row = "<row_label>\<col_label>" then the
// column sweep values; each data row starts with its row sweep value.
struct GridData {
  std::string row_label = "row";
  std::string col_label = "col";
  std::vector<double> row_values;
  std::vector<double> col_values;
  Eigen::MatrixXd values;

  void validate() const;
};

void write_grid_csv(const std::string& path, const GridData& grid);
GridData read_grid_csv(const std::string& path);

// Named columns of equal length; first line holds the names.
void write_table_csv(const std::string& path, const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns);
std::vector<std::vector<double>> read_table_csv(const std::string& path,
                                                std::vector<std::string>* names = nullptr);

// Sidecar: {generator, code_version, config_hash, config, units, ...extra}.
void write_sidecar_json(const std::string& path, const ConfigKv& config,
                        const std::map<std::string, std::string>& units,
                        const nlohmann::ordered_json& extra = nlohmann::ordered_json::object());

// Density matrix as row-major [re, im] pairs plus metadata.
void write_density_json(const std::string& path, const Mat& rho,
                        const nlohmann::ordered_json& meta = nlohmann::ordered_json::object());
Mat read_density_json(const std::string& path);

// Two-column trace CSV: "t_ns,value".
void write_trace_csv(const std::string& path, const KernelTrace& trace);
KernelTrace read_trace_csv(const std::string& path,
                           KernelTrace::Kind kind = KernelTrace::Kind::step_response);

// Parametric kernel record {form, params, dt, n}.
void write_kernel_json(const std::string& path, const StepForm& form, double dt, int n,
                       const nlohmann::ordered_json& meta = nlohmann::ordered_json::object());
StepForm read_kernel_json(const std::string& path, double* dt = nullptr, int* n = nullptr);

// Wigner sample list CSV: "re_alpha,im_alpha,value[,shots]".
void write_wigner_csv(const std::string& path, const std::vector<WignerPoint>& points);
std::vector<WignerPoint> read_wigner_csv(const std::string& path);

}  // namespace qrsim
