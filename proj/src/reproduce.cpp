#include "classtab/reproduce.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "classtab/builtin.hpp"

namespace classtab {

bool ReproductionReport::all_pass() const {
  for (const auto& c : cases)
    if (c.status == "fail") return false;
  return true;
}

std::vector<std::string> ReproductionReport::failing_cases() const {
  std::vector<std::string> out;
  for (const auto& c : cases)
    if (c.status == "fail") out.push_back(c.name);
  return out;
}

namespace {

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t salt) {
  return seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

// ---------------------------------------------------------------------------
// Stability chain: rounding net, stability deficit, mismatch, anchors
// ---------------------------------------------------------------------------

ChainResult run_stability_chain(const ExtendedField& field, const NormP& p,
                                double eps1, double eps2, const Mat& anchors,
                                std::uint64_t seed, const TrainOptions& topts) {
  ChainResult out;
  const double xi = 0.04;  // collar width of the rounding surrogate
  const Domain K = default_training_box(field, 2.0 * xi);

  TrainOptions opts = topts;
  const std::int64_t budget = opts.budget;
  const HField H(field, p, BoundaryMode::extension, opts.dist);
  for (int attempt = 0; attempt < 3; ++attempt) {
    opts.budget = budget << attempt;  // anchor misses retrain at higher budget
    opts.seed = seed + 131u * static_cast<std::uint64_t>(attempt);
    auto [net, report] = train_rounding(field, K, p, xi, opts);
    out.net = std::move(net);
    out.train_report = report;
    out.anchors_total = static_cast<int>(anchors.rows());
    out.anchors_matched = 0;
    for (Eigen::Index i = 0; i < anchors.rows(); ++i) {
      const Vec x = anchors.row(i).transpose();
      if (class_prediction(out.net.forward(x)) == H.slot_of(field.evaluate(x)))
        ++out.anchors_matched;
    }
    // the chain's gates are downstream; retrain only when the argmax
    // behaviour itself is off
    if (out.anchors_matched == out.anchors_total &&
        report.interpolation_fraction == 1.0)
      break;
  }
  out.pass_anchors = out.anchors_matched == out.anchors_total;

  // stability deficit, both sides under the literal (extension) distance
  StabilityOptions sopts;
  sopts.seed = case_seed(seed, 11);
  sopts.mc_samples = 400000;
  const StabilityEstimate s_f =
      class_stability(field, p, DistanceMode::pointwise, BoundaryMode::extension,
                      Integrator::monte_carlo, sopts);
  StabilityOptions nopts = sopts;
  nopts.seed = case_seed(seed, 12);
  nopts.mc_samples = 200000;
  const StabilityEstimate s_net = stability_of_net(
      out.net, field.domain(), p, DistanceMode::pointwise, BoundaryMode::extension,
      Integrator::monte_carlo, nopts,
      std::vector<int>(static_cast<std::size_t>(field.dim()), 1000));
  out.target_stability = s_f.value;
  out.target_std_error = s_f.std_error;
  out.net_stability = s_net.value;
  out.net_std_error = s_net.std_error;
  out.deficit = std::max(0.0, s_f.value - s_net.value);
  const double sigma3 = 3.0 * std::hypot(s_f.std_error, s_net.std_error);
  out.pass_deficit = out.deficit <= eps1 + sigma3;

  // mismatch measure of {x in M : f(x) != predicted label}
  const auto net_label = [&](const VecCRef& x) {
    const int slot = class_prediction(out.net.forward(x));
    return out.net.slot_labels[static_cast<std::size_t>(slot - 1)];
  };
  const AccuracyEstimate acc =
      accuracy_measure(net_label, field, field.domain(), 400000, case_seed(seed, 13));
  out.mismatch_measure = field.domain().volume() - acc.measure;
  out.mismatch_std_error = acc.std_error;
  out.pass_mismatch = out.mismatch_measure + 3.0 * acc.std_error <= eps2;
  return out;
}

ChainResult default_disk_chain(std::uint64_t seed) {
  const ExtendedField disk = extend(builtin_field("disk"));
  Mat anchors(5, 2);
  anchors << 0.0, 0.0, 0.75, 0.75, -0.75, 0.75, 0.75, -0.75, -0.75, -0.75;
  TrainOptions topts;
  topts.width = 128;
  topts.budget = 1600;
  topts.max_restarts = 2;
  topts.train_spacing = 0.015;
  topts.meps_spacing = 0.01;
  return run_stability_chain(disk, NormP(2.0), 0.05, 0.05, anchors, seed, topts);
}

// ---------------------------------------------------------------------------
// Reproduction table
// ---------------------------------------------------------------------------

namespace {

CaseResult stability_case(const std::string& name, const std::string& field_name,
                          double paper_value, double tol, std::uint64_t seed,
                          std::uint64_t salt) {
  const ExtendedField f = extend(builtin_field(field_name));
  StabilityOptions opts;
  opts.seed = case_seed(seed, salt);
  opts.mc_samples = 1000000;
  const StabilityEstimate est =
      class_stability(f, NormP(1.0), DistanceMode::pointwise, BoundaryMode::interior,
                      Integrator::monte_carlo, opts);
  CaseResult c;
  c.name = name;
  c.provenance = "paper";
  c.mode = "pointwise/interior/mc";
  c.paper_value = paper_value;
  c.computed = est.value;
  c.uncertainty = est.std_error;
  const double gate = std::max(tol, 3.0 * est.std_error);
  c.status = std::abs(est.value - paper_value) <= gate ? "pass" : "fail";
  return c;
}

CaseResult f2_case(std::uint64_t seed) {
  // literal evaluation of the distance definition integrates to 3/8 on
  // f2; the stated value 0.5 is recorded as a documented deviation
  const double oracle = 0.375;
  const ExtendedField f = extend(builtin_field("f2"));
  StabilityOptions opts;
  opts.seed = case_seed(seed, 3);
  opts.mc_samples = 1000000;
  const StabilityEstimate est =
      class_stability(f, NormP(1.0), DistanceMode::pointwise, BoundaryMode::interior,
                      Integrator::monte_carlo, opts);
  CaseResult c;
  c.name = "S1_f2_interior";
  c.provenance = "derived-oracle";
  c.mode = "pointwise/interior/mc";
  c.paper_value = 0.5;
  c.computed = est.value;
  c.uncertainty = est.std_error;
  const bool near_oracle =
      std::abs(est.value - oracle) <= std::max(0.005, 3.0 * est.std_error);
  c.status = near_oracle ? "documented deviation" : "fail";
  c.note = "piecewise-integration oracle gives 0.375; stated value 0.5 is not "
           "reproducible from the distance definition";
  return c;
}

CaseResult f3_pointwise_case(std::uint64_t seed) {
  const ExtendedField f = extend(builtin_field("f3"));
  StabilityOptions opts;
  opts.seed = case_seed(seed, 4);
  opts.mc_samples = 100000;
  const StabilityEstimate est =
      class_stability(f, NormP(1.0), DistanceMode::pointwise, BoundaryMode::interior,
                      Integrator::monte_carlo, opts);
  CaseResult c;
  c.name = "S1_f3_pointwise";
  c.provenance = "paper";
  c.mode = "pointwise/interior/mc";
  c.paper_value = 0.0;
  c.computed = est.value;
  c.uncertainty = est.std_error;
  c.status = est.value < 1e-3 ? "pass" : "fail";
  c.note = "every point flips within a few ulps";
  return c;
}

CaseResult f3_measure_case(std::uint64_t seed) {
  // rasterized at a dyadic resolution the parity flips vanish: the cell
  // centres are dyadic rationals whose mantissas are even, so the grid
  // field is exactly the sign step
  const LabelField raster(rasterize(builtin_field("f3"), {16384}), "f3-grid");
  const ExtendedField f = extend(raster);
  StabilityOptions opts;
  opts.seed = case_seed(seed, 5);
  opts.grid_cells = {2000};
  opts.dist.samples_per_radius = 2048;
  opts.dist.bisection_depth = 24;
  opts.dist.seed = case_seed(seed, 6);
  const StabilityEstimate est =
      class_stability(f, NormP(1.0), DistanceMode::measure, BoundaryMode::interior,
                      Integrator::grid, opts);
  CaseResult c;
  c.name = "S1_f3_measure";
  c.provenance = "paper";
  c.mode = "measure/interior/grid";
  c.paper_value = 1.0;
  c.computed = est.value;
  c.uncertainty = est.std_error;
  c.status = std::abs(est.value - 1.0) <= 0.02 ? "pass" : "fail";
  c.note = "pointwise-unstable flips carry no measure";
  return c;
}

void cube_ball_cases(std::vector<CaseResult>& cases, std::uint64_t seed) {
  for (int n = 1; n <= 5; ++n) {
    for (const double a : {0.5, 1.0}) {
      std::ostringstream name;
      name << "cube_mc_n" << n << "_a" << a;
      const double closed = cube_stability_closed_form(n, a);
      std::ostringstream spec;
      spec << "cube:n=" << n << ",a=" << a;
      const ExtendedField f = extend(builtin_field(spec.str()));
      StabilityOptions opts;
      opts.seed = case_seed(seed, 100 + static_cast<std::uint64_t>(20 * n) +
                                      (a < 1.0 ? 1 : 0));
      opts.mc_samples = n <= 3 ? 1000000 : 200000;
      const StabilityEstimate est = class_stability(
          f, NormP(2.0), DistanceMode::pointwise, BoundaryMode::extension,
          Integrator::monte_carlo, opts);
      CaseResult c;
      c.name = name.str();
      c.provenance = "paper";
      c.mode = "pointwise/extension/mc";
      c.paper_value = closed;
      c.computed = est.value;
      c.uncertainty = est.std_error;
      const bool consistent = std::abs(est.value - closed) <= 3.0 * est.std_error;
      const bool precise = 3.0 * est.std_error <= 0.01 * closed;
      c.status = consistent && precise ? "pass" : "fail";
      cases.push_back(std::move(c));
    }
  }
  for (int n = 1; n <= 5; ++n) {
    std::ostringstream name;
    name << "ball_mc_n" << n;
    const double closed = ball_stability_closed_form(n, 1.0);
    std::ostringstream spec;
    spec << "ball:n=" << n << ",R=1";
    const ExtendedField f = extend(builtin_field(spec.str()));
    StabilityOptions opts;
    opts.seed = case_seed(seed, 200 + static_cast<std::uint64_t>(n));
    opts.mc_samples = n <= 3 ? 1000000 : 200000;
    const StabilityEstimate est =
        class_stability(f, NormP(2.0), DistanceMode::pointwise,
                        BoundaryMode::extension, Integrator::monte_carlo, opts);
    CaseResult c;
    c.name = name.str();
    c.provenance = "paper";
    c.mode = "pointwise/extension/mc p=2";
    c.paper_value = closed;
    c.computed = est.value;
    c.uncertainty = est.std_error;
    const bool consistent = std::abs(est.value - closed) <= 3.0 * est.std_error;
    const bool precise = 3.0 * est.std_error <= 0.02 * closed;
    c.status = consistent && precise ? "pass" : "fail";
    cases.push_back(std::move(c));
  }
}

CaseResult ratio_case() {
  CaseResult c;
  c.name = "volume_matched_ratio";
  c.provenance = "paper";
  c.mode = "closed-form";
  c.computed = volume_matched_ratio(2);
  c.paper_value = 2.0 / std::sqrt(M_PI);
  bool monotone = true;
  double prev = volume_matched_ratio(1);
  for (int n = 2; n <= 64; ++n) {
    const double r = volume_matched_ratio(n);
    if (!(r > prev)) monotone = false;
    prev = r;
  }
  const bool n1_exact = std::abs(volume_matched_ratio(1) - 1.0) <= 1e-12;
  c.status = monotone && n1_exact &&
                     std::abs(c.computed - c.paper_value) <= 1e-12
                 ? "pass"
                 : "fail";
  c.note = "strictly increasing for n = 1..64; ratio(1) = 1";
  return c;
}

CaseResult lipschitz_case(const std::string& field_name, BoundaryMode bmode,
                          const NormP& p, std::uint64_t seed, std::uint64_t salt) {
  const ExtendedField f = extend(builtin_field(field_name));
  const LipschitzWitness w =
      lipschitz_check_H(f, p, 100000, case_seed(seed, salt), bmode);
  CaseResult c;
  c.name = "lipschitz_H_" + field_name.substr(0, field_name.find(':'));
  c.provenance = "paper";
  c.mode = std::string("H/") + to_string(bmode);
  c.paper_value = 1.0;
  c.computed = w.max_ratio;
  c.status = w.max_ratio <= 1.0 + 1e-9 ? "pass" : "fail";
  return c;
}

void empirical_lipschitz_cases(std::vector<CaseResult>& cases, std::uint64_t seed) {
  struct Row {
    const char* name;
    const char* field;
    double bound;
  };
  // the same decision geometry with labels {1,2}, {1,1001} and inputs
  // shrunk by 1000 gives lower bounds 50, 50000 and 50000
  const Row rows[] = {{"empirical_lipschitz_H1", "H1", 50.0},
                      {"empirical_lipschitz_H2", "H2", 50000.0},
                      {"empirical_lipschitz_H3", "H3", 50000.0}};
  for (const auto& row : rows) {
    const ExtendedField f = extend(builtin_field(row.field));
    const double L =
        empirical_lipschitz(f, 20000, NormP(1.0), case_seed(seed, 300));
    CaseResult c;
    c.name = row.name;
    c.provenance = "derived-oracle";
    c.mode = "label-values p=1";
    c.paper_value = row.bound;
    c.computed = L;
    c.status = L >= row.bound * (1.0 - 1e-9) ? "pass" : "fail";
    cases.push_back(std::move(c));
  }
}

CaseResult train_case(const std::string& name, const TrainReport& report,
                      double note_runtime = -1.0) {
  CaseResult c;
  c.name = name;
  c.provenance = "derived-oracle";
  c.mode = "train/extension";
  c.computed = report.sup_error;
  c.paper_value = report.target;
  c.status =
      report.reached_target && report.interpolation_fraction == 1.0 ? "pass" : "fail";
  std::ostringstream note;
  note << "interpolation " << report.interpolation_fraction << " on "
       << report.stable_points << " stable grid points";
  if (note_runtime >= 0.0) note << ", " << note_runtime << "s";
  c.note = note.str();
  return c;
}

}  // namespace

ReproductionReport run_reproduction(std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  ReproductionReport report;
  report.seed = seed;

  report.cases.push_back(stability_case("S1_f1_interior", "f1", 1.0, 0.01, seed, 1));
  report.cases.push_back(stability_case("S1_f4_interior", "f4", 1.25, 0.01, seed, 2));
  report.cases.push_back(f2_case(seed));
  report.cases.push_back(f3_pointwise_case(seed));
  report.cases.push_back(f3_measure_case(seed));
  cube_ball_cases(report.cases, seed);
  report.cases.push_back(ratio_case());

  report.cases.push_back(lipschitz_case("f1", BoundaryMode::interior, NormP(1.0), seed, 31));
  report.cases.push_back(lipschitz_case("f4", BoundaryMode::interior, NormP(1.0), seed, 32));
  report.cases.push_back(
      lipschitz_case("cube:n=2,a=1", BoundaryMode::extension, NormP(2.0), seed, 33));
  report.cases.push_back(lipschitz_case("disk", BoundaryMode::interior, NormP(2.0), seed, 34));
  empirical_lipschitz_cases(report.cases, seed);

  {
    const ExtendedField f1 = extend(builtin_field("f1"));
    TrainOptions opts;
    opts.width = 64;
    opts.budget = 9000;
    opts.max_restarts = 3;
    opts.seed = case_seed(seed, 41);
    const Domain K = default_training_box(f1, 0.2);
    const auto [net, rep] = train_shallow(f1, K, NormP(1.0), 0.2, opts);
    report.cases.push_back(train_case("interpolation_shallow_f1", rep));
  }
  {
    const ExtendedField f1 = extend(builtin_field("f1"));
    TrainOptions opts;
    opts.budget = 24000;
    opts.max_restarts = 4;
    opts.depth_budget = 2;
    opts.seed = case_seed(seed, 42);
    const Domain K = default_training_box(f1, 0.2);
    const auto [net, rep] = train_narrow_deep(f1, K, NormP(1.0), 0.2, opts);
    report.cases.push_back(train_case("interpolation_narrow_deep_f1", rep));
  }
  {
    const ExtendedField disk = extend(builtin_field("disk"));
    TrainOptions opts;
    opts.width = 256;
    opts.budget = 2600;
    opts.max_restarts = 2;
    opts.train_spacing = 0.02;
    opts.meps_spacing = 0.01;
    opts.seed = case_seed(seed, 43);
    const Domain K = default_training_box(disk, 0.1);
    const auto [net, rep] = train_shallow(disk, K, NormP(2.0), 0.1, opts);
    report.cases.push_back(train_case("interpolation_shallow_disk", rep));
  }
  {
    const ChainResult chain = default_disk_chain(case_seed(seed, 44));
    CaseResult c;
    c.name = "stability_chain_disk";
    c.provenance = "paper";
    c.mode = "rounding-chain eps1=eps2=0.05";
    c.computed = chain.deficit;
    c.uncertainty = std::hypot(chain.target_std_error, chain.net_std_error);
    c.status = chain.pass_deficit && chain.pass_mismatch && chain.pass_anchors
                   ? "pass"
                   : "fail";
    std::ostringstream note;
    note << "deficit " << chain.deficit << ", mismatch " << chain.mismatch_measure
         << ", anchors " << chain.anchors_matched << "/" << chain.anchors_total;
    c.note = note.str();
    report.cases.push_back(std::move(c));
  }

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

std::string report_to_json_string(const ReproductionReport& report) {
  nlohmann::json j;
  j["seed"] = report.seed;
  j["version"] = report.version;
  j["runtime_seconds"] = report.runtime_seconds;
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : report.cases) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["provenance"] = c.provenance;
    jc["mode"] = c.mode;
    if (!std::isnan(c.paper_value)) jc["paper_value"] = c.paper_value;
    if (!std::isnan(c.computed)) jc["computed"] = c.computed;
    if (!std::isnan(c.uncertainty)) jc["uncertainty"] = c.uncertainty;
    jc["status"] = c.status;
    if (!c.note.empty()) jc["note"] = c.note;
    cases.push_back(std::move(jc));
  }
  j["cases"] = std::move(cases);
  return j.dump(2);
}

void write_report_json(const ReproductionReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << report_to_json_string(report) << "\n";
}

void write_report_csv(const ReproductionReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "name,provenance,mode,paper_value,computed,uncertainty,status\n";
  for (const auto& c : report.cases) {
    out << c.name << "," << c.provenance << "," << c.mode << "," << fmt(c.paper_value)
        << "," << fmt(c.computed) << "," << fmt(c.uncertainty) << "," << c.status
        << "\n";
  }
}

}  // namespace classtab
