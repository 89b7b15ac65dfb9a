#include "classtab/field_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace classtab {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("field file: malformed number '" + s + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return in;
}

}  // namespace

void save_point_cloud(const LabelField& field, const std::string& path) {
  if (!field.is_cloud())
    throw std::invalid_argument("save_point_cloud: field is not a point cloud");
  const PointCloud& c = field.cloud();
  auto out = open_out(path);
  for (Eigen::Index j = 0; j < c.points.cols(); ++j)
    out << "x_" << (j + 1) << ",";
  out << "label\n";
  for (Eigen::Index i = 0; i < c.points.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.points.cols(); ++j)
      out << format_double(c.points(i, j)) << ",";
    out << c.labels[static_cast<std::size_t>(i)] << "\n";
  }
}

LabelField load_point_cloud(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("point cloud file: missing header row");
  const auto header = split_csv(line);
  if (header.size() < 2 || header.back() != "label")
    throw std::invalid_argument("point cloud file: header must be x_1,...,x_d,label");
  const auto d = static_cast<Eigen::Index>(header.size() - 1);

  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw std::invalid_argument("point cloud file: wrong column count in row " +
                                  std::to_string(rows.size() + 2));
    std::vector<double> coords(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j)
      coords[static_cast<std::size_t>(j)] = parse_double(cells[static_cast<std::size_t>(j)]);
    rows.push_back(std::move(coords));
    labels.push_back(static_cast<Label>(std::stol(cells.back())));
  }
  if (rows.empty()) throw std::invalid_argument("point cloud file: no points");

  PointCloud c;
  c.points.resize(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      c.points(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  c.labels = std::move(labels);

  Vec lo = c.points.colwise().minCoeff().transpose();
  Vec hi = c.points.colwise().maxCoeff().transpose();
  for (Eigen::Index j = 0; j < d; ++j)
    if (!(lo[j] < hi[j])) {
      lo[j] -= 0.5;
      hi[j] += 0.5;
    }
  c.domain = Domain::box(lo, hi);
  return LabelField(std::move(c), path);
}

void save_grid_field(const LabelField& field, const std::string& path) {
  if (!field.is_grid())
    throw std::invalid_argument("save_grid_field: field is not a grid field");
  const GridField& g = field.grid();
  auto out = open_out(path);

  nlohmann::json header;
  header["dim"] = field.dim();
  header["lo"] = std::vector<double>(g.box.lo().data(), g.box.lo().data() + field.dim());
  header["hi"] = std::vector<double>(g.box.hi().data(), g.box.hi().data() + field.dim());
  header["resolution"] = g.resolution;
  header["label_set"] = field.label_set();
  out << header.dump() << "\n";

  const int row_len = g.resolution.back();
  for (std::size_t i = 0; i < g.labels.size(); ++i) {
    out << g.labels[i];
    out << (((i + 1) % static_cast<std::size_t>(row_len)) == 0 ? '\n' : ',');
  }
}

LabelField load_grid_field(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("grid field file: missing JSON header line");
  const auto header = nlohmann::json::parse(line);

  const int d = header.at("dim").get<int>();
  const auto lo_v = header.at("lo").get<std::vector<double>>();
  const auto hi_v = header.at("hi").get<std::vector<double>>();
  const auto resolution = header.at("resolution").get<std::vector<int>>();
  const auto label_set = header.at("label_set").get<std::vector<Label>>();
  if (static_cast<int>(lo_v.size()) != d || static_cast<int>(hi_v.size()) != d ||
      static_cast<int>(resolution.size()) != d)
    throw std::invalid_argument("grid field file: inconsistent header dimensions");

  GridField g;
  g.box = Domain::box(Eigen::Map<const Vec>(lo_v.data(), d),
                      Eigen::Map<const Vec>(hi_v.data(), d));
  g.resolution = resolution;
  g.labels.reserve(static_cast<std::size_t>(g.cell_count()));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    for (const auto& cell : split_csv(line)) {
      const Label y = static_cast<Label>(std::stol(cell));
      if (std::find(label_set.begin(), label_set.end(), y) == label_set.end())
        throw std::invalid_argument("grid field file: label outside the declared label_set");
      g.labels.push_back(y);
    }
  }
  return LabelField(std::move(g), path);
}

void save_field(const LabelField& field, const std::string& path) {
  if (field.is_cloud())
    save_point_cloud(field, path);
  else if (field.is_grid())
    save_grid_field(field, path);
  else
    throw std::invalid_argument("save_field: oracle fields have no file form");
}

LabelField load_field(const std::string& path) {
  auto in = open_in(path);
  std::string first;
  std::getline(in, first);
  in.close();
  if (!first.empty() && first.front() == '{') return load_grid_field(path);
  return load_point_cloud(path);
}

}  // namespace classtab
