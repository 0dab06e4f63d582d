#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include "pflm/common.hpp"
#include "pflm/csv.hpp"
#include "pflm/grid.hpp"

namespace pflm {

/// Provenance of a simulated dataset; example_id = 0 marks external data.
struct DatasetMeta {
  int example_id = 0;
  double v = 0.0;
  std::uint64_t seed = 0;
  double sigma = 0.0;
};

/// n functional curves sampled on a common grid, an n×p scalar design and n
/// responses. Immutable by convention after construction.
struct FunctionalDataset {
  Grid grid;
  Eigen::MatrixXd x_values;  // n×G
  Eigen::MatrixXd z;         // n×p
  Eigen::VectorXd y;         // n
  DatasetMeta meta;

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p() const { return z.cols(); }
};

inline void validate_dataset(const FunctionalDataset& ds) {
  if (ds.x_values.rows() != ds.y.size() || ds.z.rows() != ds.y.size())
    throw std::invalid_argument("dataset: x_values, z and y row counts disagree");
  if (ds.x_values.cols() != ds.grid.num_points)
    throw std::invalid_argument("dataset: x_values columns do not match grid");
  if (!ds.x_values.allFinite() || !ds.z.allFinite() || !ds.y.allFinite())
    throw std::invalid_argument("dataset: non-finite entries");
}

namespace detail {

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw format_error("bad JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

}  // namespace detail

// Directory layout: manifest.json, x.csv (n×G), z.csv (n×p), y.csv (n×1),
// grid.csv (G×1). The manifest pins all dimensions; every CSV is checked
// against it on load.

inline void save_dataset(const FunctionalDataset& ds, const std::filesystem::path& dir) {
  validate_dataset(ds);
  std::filesystem::create_directories(dir);
  nlohmann::json manifest = {
      {"n", ds.n()},           {"p", ds.p()},
      {"G", ds.grid.num_points}, {"example_id", ds.meta.example_id},
      {"v", ds.meta.v},        {"seed", ds.meta.seed},
      {"sigma", ds.meta.sigma},
  };
  atomic_write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  write_matrix_csv(dir / "x.csv", ds.x_values);
  write_matrix_csv(dir / "z.csv", ds.z);
  write_matrix_csv(dir / "y.csv", ds.y);
  write_matrix_csv(dir / "grid.csv", ds.grid.points);
}

inline FunctionalDataset load_dataset(const std::filesystem::path& dir) {
  const nlohmann::json manifest = detail::read_json_file(dir / "manifest.json");
  FunctionalDataset ds;
  Eigen::Index n = 0, p = 0;
  int g_points = 0;
  try {
    n = manifest.at("n").get<Eigen::Index>();
    p = manifest.at("p").get<Eigen::Index>();
    g_points = manifest.at("G").get<int>();
    ds.meta.example_id = manifest.at("example_id").get<int>();
    ds.meta.v = manifest.at("v").get<double>();
    ds.meta.seed = manifest.at("seed").get<std::uint64_t>();
    ds.meta.sigma = manifest.at("sigma").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw format_error("manifest.json in " + dir.string() + ": " + e.what());
  }
  if (n < 0 || p < 0 || g_points < 2)
    throw format_error("manifest.json in " + dir.string() + ": bad dimensions");

  const Eigen::MatrixXd grid_points = read_matrix_csv(dir / "grid.csv");
  if (grid_points.rows() != g_points || grid_points.cols() != 1)
    throw format_error("grid.csv does not match manifest G in " + dir.string());
  ds.grid.num_points = g_points;
  ds.grid.weight = 1.0 / g_points;
  ds.grid.points = grid_points.col(0);
  for (int a = 0; a < g_points; ++a) {
    const double expected = (a + 0.5) / g_points;
    if (std::abs(ds.grid.points[a] - expected) > 1e-12)
      throw format_error("grid.csv is not a midpoint grid in " + dir.string());
  }

  ds.x_values = read_matrix_csv(dir / "x.csv");
  if (ds.x_values.rows() != n || ds.x_values.cols() != g_points)
    throw format_error("x.csv dimensions do not match manifest in " + dir.string());

  ds.z = read_matrix_csv(dir / "z.csv");
  if (p == 0) {
    if (ds.z.size() != 0) throw format_error("z.csv should be empty (p=0) in " + dir.string());
    ds.z.resize(n, 0);
  } else if (ds.z.rows() != n || ds.z.cols() != p) {
    throw format_error("z.csv dimensions do not match manifest in " + dir.string());
  }

  const Eigen::MatrixXd y = read_matrix_csv(dir / "y.csv");
  if (y.rows() != n || y.cols() != 1)
    throw format_error("y.csv dimensions do not match manifest in " + dir.string());
  ds.y = y.col(0);

  validate_dataset(ds);
  return ds;
}

}  // namespace pflm
