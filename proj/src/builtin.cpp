#include "classtab/builtin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace classtab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec vec1(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

Domain interval(double lo, double hi) { return Domain::box(vec1(lo), vec1(hi)); }

// --- 1D step fields ---------------------------------------------------------

// sign step at `flip`, label 1 below, 2 at and above (sgn(0) counts as +)
LabelField step_field(double lo, double hi, double flip, const std::string& name) {
  OracleField o;
  o.domain = interval(lo, hi);
  o.scan_resolution = {4096};
  o.evaluate = [flip](const VecCRef& x) { return x[0] < flip ? 1 : 2; };
  o.interior_flip_distance = [flip](const VecCRef& x, const NormP&) {
    return std::abs(x[0] - flip);
  };
  return LabelField(std::move(o), {1, 2}, name);
}

// sign step with isolated flipped points at +-0.5
LabelField f2_field() {
  OracleField o;
  o.domain = interval(-1.0, 1.0);
  o.scan_resolution = {4096};
  o.evaluate = [](const VecCRef& x) {
    if (x[0] == 0.5) return 1;
    if (x[0] == -0.5) return 2;
    return x[0] < 0.0 ? 1 : 2;
  };
  o.interior_flip_distance = [](const VecCRef& xv, const NormP&) {
    const double x = xv[0];
    if (x == 0.5 || x == -0.5) return 0.0;  // opposite labels arbitrarily close
    if (x > 0.0) return std::min(x, std::abs(x - 0.5));
    if (x < 0.0) return std::min(-x, std::abs(x + 0.5));
    return 0.0;  // x = 0 sits on the step
  };
  return LabelField(std::move(o), {1, 2}, "f2");
}

// machine-precision analog of the rational/irrational flip field: the
// label flips with the parity of the mantissa, so every point has a
// differently labelled neighbour within a few ulps
bool mantissa_odd(double x) {
  return (std::bit_cast<std::uint64_t>(x) & 1ULL) != 0;
}

LabelField f3_field() {
  OracleField o;
  o.domain = interval(-1.0, 1.0);
  o.scan_resolution = {4096};
  o.evaluate = [](const VecCRef& xv) {
    const int base = xv[0] < 0.0 ? 1 : 2;
    if (!mantissa_odd(xv[0])) return base;
    return base == 1 ? 2 : 1;
  };
  o.interior_flip_distance = [](const VecCRef& xv, const NormP&) {
    // adjacent representable doubles always differ in mantissa parity
    const double x = xv[0];
    double gap = kInf;
    const double up = std::nextafter(x, kInf);
    const double down = std::nextafter(x, -kInf);
    if (up <= 1.0) gap = std::min(gap, up - x);
    if (down >= -1.0) gap = std::min(gap, x - down);
    return gap;
  };
  return LabelField(std::move(o), {1, 2}, "f3");
}

// --- H1 point cloud ---------------------------------------------------------

LabelField h1_field() {
  // regular grids on [-1,-0.01] and [0.01,1], step 0.01
  const int side = 100;
  Mat pts(2 * side, 1);
  std::vector<Label> ys(2 * side);
  for (int k = 0; k < side; ++k) {
    pts(k, 0) = -1.0 + 0.01 * k;  // -1 .. -0.01
    ys[static_cast<std::size_t>(k)] = 1;
    pts(side + k, 0) = 0.01 + 0.01 * k;  // 0.01 .. 1
    ys[static_cast<std::size_t>(side + k)] = 2;
  }
  PointCloud c;
  c.points = std::move(pts);
  c.labels = std::move(ys);
  c.domain = interval(-1.0, 1.0);
  return LabelField(std::move(c), "H1");
}

// --- indicator fields -------------------------------------------------------

LabelField cube_field(int n, double a) {
  if (n < 1 || !(a > 0.0))
    throw std::invalid_argument("cube field: needs n >= 1 and a > 0");
  OracleField o;
  o.domain = Domain::box(Vec::Constant(n, -a), Vec::Constant(n, a));
  o.scan_resolution.assign(static_cast<std::size_t>(n), n <= 2 ? 256 : 32);
  o.evaluate = [](const VecCRef&) { return 1; };
  o.interior_flip_distance = [](const VecCRef&, const NormP&) { return kInf; };
  std::ostringstream name;
  name << "cube:n=" << n << ",a=" << a;
  return LabelField(std::move(o), {1}, name.str());
}

LabelField ball_field(int n, double R) {
  if (n < 1 || !(R > 0.0))
    throw std::invalid_argument("ball field: needs n >= 1 and R > 0");
  OracleField o;
  o.domain = Domain::ball(Vec::Zero(n), R);
  o.scan_resolution.assign(static_cast<std::size_t>(n), n <= 2 ? 256 : 32);
  o.evaluate = [](const VecCRef&) { return 1; };
  o.interior_flip_distance = [](const VecCRef&, const NormP&) { return kInf; };
  std::ostringstream name;
  name << "ball:n=" << n << ",R=" << R;
  return LabelField(std::move(o), {1}, name.str());
}

LabelField disk_field(double r) {
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("disk field: needs 0 < r < 1");
  OracleField o;
  o.domain = Domain::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0));
  o.scan_resolution = {400, 400};
  o.evaluate = [r](const VecCRef& x) { return x.norm() <= r ? 2 : 1; };
  o.interior_flip_distance = [r](const VecCRef& x, const NormP& p) {
    if (p.p() != 2.0) return std::numeric_limits<double>::quiet_NaN();
    return std::abs(x.norm() - r);
  };
  std::ostringstream name;
  name << "disk:r=" << r;
  return LabelField(std::move(o), {1, 2}, name.str());
}

// --- name parsing ------------------------------------------------------------

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("builtin_field: malformed parameter '" + item + "'");
    out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return out;
}

}  // namespace

std::vector<std::string> builtin_catalog() {
  return {
      "f1              sign step on [-1,1], labels {1,2}",
      "f2              sign step with isolated flips at +-0.5",
      "f3              mantissa-parity analog of the everywhere-unstable step",
      "f4              sign step shifted to -1/2",
      "fl              two-class step at 1 on [0,2]",
      "H1              step point cloud on [-1,-0.01] u [0.01,1], labels {1,2}",
      "H2              H1 relabelled to {1,1001}",
      "H3              H1 rescaled by 1/1000",
      "cube:n=N,a=A    constant field on the cube [-a,a]^n",
      "ball:n=N,R=R    constant field on the L2 ball of radius R",
      "disk[:r=R]      disk of radius r (default 0.5) inside [-1,1]^2",
  };
}

bool is_builtin_field(const std::string& name) {
  const std::string head = name.substr(0, name.find(':'));
  static const std::vector<std::string> names = {"f1", "f2", "f3",   "f4",   "fl",  "f_l",
                                                 "H1", "H2", "H3",   "cube", "ball",
                                                 "disk"};
  return std::find(names.begin(), names.end(), head) != names.end();
}

LabelField builtin_field(const std::string& name) {
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const auto params =
      colon == std::string::npos ? std::map<std::string, double>{}
                                 : parse_params(name.substr(colon + 1));
  auto param = [&](const char* key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };

  if (head == "f1") return step_field(-1.0, 1.0, 0.0, "f1");
  if (head == "f2") return f2_field();
  if (head == "f3") return f3_field();
  if (head == "f4") return step_field(-1.0, 1.0, -0.5, "f4");
  if (head == "fl" || head == "f_l") return step_field(0.0, 2.0, 1.0, "fl");
  if (head == "H1") return h1_field();
  if (head == "H2") return relabel(h1_field(), {{1, 1}, {2, 1001}});
  if (head == "H3") return rescale_domain(h1_field(), 1.0 / 1000.0);
  if (head == "cube")
    return cube_field(static_cast<int>(param("n", 2)), param("a", 1.0));
  if (head == "ball")
    return ball_field(static_cast<int>(param("n", 2)), param("R", 1.0));
  if (head == "disk") return disk_field(param("r", 0.5));

  std::ostringstream msg;
  msg << "builtin_field: unknown field '" << name << "'. Catalog:\n";
  for (const auto& entry : builtin_catalog()) msg << "  " << entry << "\n";
  throw std::invalid_argument(msg.str());
}

}  // namespace classtab
