#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "classtab/builtin.hpp"
#include "classtab/field_io.hpp"
#include "classtab/reproduce.hpp"
#include "classtab/train.hpp"

namespace {

using namespace classtab;

LabelField resolve_field(const std::string& spec) {
  if (std::filesystem::exists(spec)) return load_field(spec);
  return builtin_field(spec);
}

Vec parse_point(const std::string& text) {
  std::vector<double> xs;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) xs.push_back(std::stod(item));
  if (xs.empty()) throw CLI::ValidationError("--point", "empty point");
  return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

NormP parse_p(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "infinity") return NormP::inf();
  return NormP(std::stod(text));
}

DistanceMode parse_mode(const std::string& text) {
  if (text == "pointwise") return DistanceMode::pointwise;
  if (text == "measure") return DistanceMode::measure;
  throw CLI::ValidationError("--mode", "expected pointwise|measure");
}

BoundaryMode parse_boundary(const std::string& text) {
  if (text == "extension") return BoundaryMode::extension;
  if (text == "interior") return BoundaryMode::interior;
  throw CLI::ValidationError("--boundary", "expected extension|interior");
}

std::string flat_csv(const nlohmann::json& j) {
  std::ostringstream header, row;
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    header << (first ? "" : ",") << key;
    row << (first ? "" : ",")
        << (value.is_string() ? value.get<std::string>() : value.dump());
    first = false;
  }
  return header.str() + "\n" + row.str() + "\n";
}

void emit(const nlohmann::json& j, const std::string& out_path,
          const std::string& format = "json") {
  const std::string text = format == "csv" ? flat_csv(j) : j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

nlohmann::json json_or_string(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"class stability toolkit"};
  app.require_subcommand(1);

  std::string field_spec, point_text, p_text = "2", mode_text = "pointwise";
  std::string boundary_text = "interior", out_path, format = "json";
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  double tau = 1e-3;
  int samples_per_radius = 4096, bisection_depth = 40;

  auto add_common = [&](CLI::App* cmd, bool with_point) {
    cmd->add_option("--field", field_spec, "field file or builtin name")->required();
    if (with_point)
      cmd->add_option("--point", point_text, "comma-separated coordinates")->required();
    cmd->add_option("--p", p_text, "norm order (1..inf)");
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--out", out_path, "output path (default stdout)");
    cmd->add_option("--format", format, "json|csv");
  };

  // --- dist -----------------------------------------------------------------
  auto* dist_cmd = app.add_subcommand("dist", "distance to the decision boundary");
  add_common(dist_cmd, true);
  dist_cmd->add_option("--mode", mode_text, "pointwise|measure");
  dist_cmd->add_option("--boundary", boundary_text, "extension|interior");
  dist_cmd->add_option("--tau", tau, "measure-mode fraction threshold");
  dist_cmd->add_option("--samples-per-radius", samples_per_radius);
  dist_cmd->add_option("--bisection-depth", bisection_depth);
  dist_cmd->callback([&] {
    const ExtendedField f = extend(resolve_field(field_spec));
    const Vec x = parse_point(point_text);
    DistanceOptions opts;
    opts.tau = tau;
    opts.samples_per_radius = samples_per_radius;
    opts.bisection_depth = bisection_depth;
    opts.seed = seed;
    const DistanceMode mode = parse_mode(mode_text);
    const BoundaryMode bmode = parse_boundary(boundary_text);
    const DistanceEstimate est =
        mode == DistanceMode::pointwise
            ? pointwise_distance(f, x, parse_p(p_text), bmode, opts)
            : measure_distance(f, x, parse_p(p_text), opts, bmode);
    nlohmann::json j;
    j["value"] = json_or_string(est.value);
    j["error_bound"] = est.error_bound;
    j["method"] = to_string(est.method);
    j["mode"] = to_string(est.mode);
    j["boundary_mode"] = to_string(est.boundary_mode);
    if (est.saturated) j["saturated"] = true;
    emit(j, out_path, format);
  });

  // --- stability --------------------------------------------------------------
  auto* stab_cmd = app.add_subcommand("stability", "class stability integral");
  add_common(stab_cmd, false);
  std::string integrator_text = "mc";
  stab_cmd->add_option("--mode", mode_text, "pointwise|measure");
  stab_cmd->add_option("--boundary", boundary_text, "extension|interior");
  stab_cmd->add_option("--samples", samples, "MC samples (0 = default)");
  stab_cmd->add_option("--integrator", integrator_text, "mc|grid");
  stab_cmd->add_option("--tau", tau, "measure-mode fraction threshold");
  stab_cmd->add_option("--samples-per-radius", samples_per_radius);
  stab_cmd->add_option("--bisection-depth", bisection_depth);
  stab_cmd->callback([&] {
    const ExtendedField f = extend(resolve_field(field_spec));
    StabilityOptions opts;
    opts.seed = seed;
    opts.mc_samples = samples;
    opts.dist.tau = tau;
    opts.dist.samples_per_radius = samples_per_radius;
    opts.dist.bisection_depth = bisection_depth;
    opts.dist.seed = seed;
    const Integrator integrator =
        integrator_text == "grid" ? Integrator::grid : Integrator::monte_carlo;
    const StabilityEstimate est =
        class_stability(f, parse_p(p_text), parse_mode(mode_text),
                        parse_boundary(boundary_text), integrator, opts);
    nlohmann::json j;
    j["value"] = json_or_string(est.value);
    j["std_error"] = est.std_error;
    j["samples"] = est.samples;
    j["mode"] = to_string(est.mode);
    j["boundary_mode"] = to_string(est.boundary_mode);
    j["integrator"] = to_string(est.integrator);
    j["seed"] = seed;
    emit(j, out_path, format);
  });

  // --- tables ------------------------------------------------------------------
  auto* tables_cmd = app.add_subcommand("tables", "closed-form stability tables");
  std::string family = "cube";
  int n_max = 8;
  double a_param = 1.0, R_param = 1.0;
  tables_cmd->add_option("--family", family, "cube|ball|ratio")->required();
  tables_cmd->add_option("--n-max", n_max, "largest dimension");
  tables_cmd->add_option("--a", a_param, "cube half-width");
  tables_cmd->add_option("--R", R_param, "ball radius");
  tables_cmd->add_option("--out", out_path, "output CSV (default stdout)");
  tables_cmd->callback([&] {
    std::ostringstream body;
    if (family == "cube") {
      body << "n,a,stability\n";
      for (int n = 1; n <= n_max; ++n)
        body << n << "," << a_param << "," << cube_stability_closed_form(n, a_param)
             << "\n";
    } else if (family == "ball") {
      body << "n,R,stability\n";
      for (int n = 1; n <= n_max; ++n)
        body << n << "," << R_param << "," << ball_stability_closed_form(n, R_param)
             << "\n";
    } else if (family == "ratio") {
      body << "n,ratio,matched_radius\n";
      for (int n = 1; n <= n_max; ++n)
        body << n << "," << volume_matched_ratio(n) << ","
             << volume_matched_radius(n, a_param) << "\n";
    } else {
      throw CLI::ValidationError("--family", "expected cube|ball|ratio");
    }
    if (out_path.empty()) {
      std::cout << body.str();
    } else {
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot write " + out_path);
      out << body.str();
    }
  });

  // --- hfield --------------------------------------------------------------------
  auto* hfield_cmd = app.add_subcommand("hfield", "H vector at a point");
  add_common(hfield_cmd, true);
  hfield_cmd->add_option("--boundary", boundary_text, "extension|interior");
  hfield_cmd->callback([&] {
    const ExtendedField f = extend(resolve_field(field_spec));
    const HField H(f, parse_p(p_text), parse_boundary(boundary_text));
    const Vec x = parse_point(point_text);
    const Vec v = H(x);
    nlohmann::json j;
    j["H"] = std::vector<double>(v.data(), v.data() + v.size());
    j["slot_labels"] = H.slot_labels();
    if (v.maxCoeff() > 0.0) {
      const int slot = class_prediction(v);
      j["predicted_slot"] = slot;
      j["predicted_label"] = H.label_of(slot);
    } else {
      j["predicted_slot"] = "undefined (boundary)";
    }
    emit(j, out_path);
  });

  // --- stableset -------------------------------------------------------------------
  auto* stable_cmd = app.add_subcommand("stableset", "grid members of the eps-stable set");
  double eps = 0.1, resolution = 0.01;
  add_common(stable_cmd, false);
  stable_cmd->add_option("--eps", eps, "stability threshold")->required();
  stable_cmd->add_option("--resolution", resolution, "grid spacing");
  stable_cmd->add_option("--boundary", boundary_text, "extension|interior");
  stable_cmd->callback([&] {
    const ExtendedField f = extend(resolve_field(field_spec));
    auto [lo, hi] = f.domain().bounding_box();
    std::vector<int> cells(static_cast<std::size_t>(f.dim()));
    for (int i = 0; i < f.dim(); ++i)
      cells[static_cast<std::size_t>(i)] =
          std::max(1, static_cast<int>(std::llround((hi[i] - lo[i]) / resolution)));
    const StableSet set =
        stable_set(f, eps, parse_p(p_text), parse_boundary(boundary_text), cells);
    std::ostringstream body;
    for (int i = 0; i < f.dim(); ++i) body << "x_" << (i + 1) << (i + 1 < f.dim() ? "," : "\n");
    for (Eigen::Index r = 0; r < set.members.rows(); ++r) {
      for (Eigen::Index c2 = 0; c2 < set.members.cols(); ++c2)
        body << set.members(r, c2) << (c2 + 1 < set.members.cols() ? "," : "\n");
    }
    if (set.empty_warning)
      std::cerr << "warning: eps-stable set is empty at eps=" << eps << "\n";
    if (out_path.empty()) {
      std::cout << body.str();
    } else {
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot write " + out_path);
      out << body.str();
    }
  });

  // --- train ----------------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "fit a shallow net to the H field");
  int width = 64;
  std::int64_t budget = 5000;
  std::string activation_text = "relu", net_path = "net.json";
  bool narrow_deep = false;
  int depth_budget = 3;
  add_common(train_cmd, false);
  train_cmd->add_option("--eps", eps, "stable-set threshold")->required();
  train_cmd->add_option("--width", width, "hidden width");
  train_cmd->add_option("--budget", budget, "refinement iterations");
  train_cmd->add_option("--activation", activation_text, "relu|tanh|sigmoid");
  train_cmd->add_flag("--narrow-deep", narrow_deep, "fixed width d+q+2, growing depth");
  train_cmd->add_option("--depth-budget", depth_budget, "narrow-deep depth limit");
  train_cmd->callback([&] {
    const ExtendedField f = extend(resolve_field(field_spec));
    TrainOptions opts;
    opts.width = width;
    opts.budget = budget;
    opts.seed = seed;
    opts.depth_budget = depth_budget;
    opts.activation = activation_from_string(activation_text);
    const Domain K = default_training_box(f, eps);
    const auto [net, report] =
        narrow_deep ? train_narrow_deep(f, K, parse_p(p_text), eps, opts)
                    : train_shallow(f, K, parse_p(p_text), eps, opts);
    const std::string net_out = out_path.empty() ? net_path : out_path;
    save_net(net, net_out);
    nlohmann::json j;
    j["net"] = net_out;
    j["sup_error"] = report.sup_error;
    j["grid_sup_error"] = report.grid_sup_error;
    j["target"] = report.target;
    j["iterations"] = report.iterations;
    j["interpolation_fraction"] = report.interpolation_fraction;
    j["stable_points"] = report.stable_points;
    j["reached_target"] = report.reached_target;
    j["vacuous"] = report.vacuous;
    std::cout << j.dump(2) << "\n";
    if (!report.reached_target) std::exit(1);
  });

  // --- verify ----------------------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "re-check a saved net against a field");
  std::string verify_net_path;
  verify_cmd->add_option("--net", verify_net_path, "net JSON file")->required();
  verify_cmd->add_option("--field", field_spec, "field file or builtin name")->required();
  verify_cmd->add_option("--eps", eps, "stable-set threshold")->required();
  verify_cmd->add_option("--p", p_text, "norm order");
  verify_cmd->add_option("--out", out_path, "output path");
  verify_cmd->callback([&] {
    const ExtendedField f = extend(resolve_field(field_spec));
    const Mlp net = load_net(verify_net_path);
    const HField H(f, parse_p(p_text), BoundaryMode::extension);
    auto [lo, hi] = f.domain().bounding_box(eps);
    const double spacing = (hi - lo).maxCoeff() / 200.0;

    // sup deviation from H over a fresh grid, plus argmax interpolation
    double sup = 0.0;
    std::int64_t stable = 0, matched = 0;
    std::vector<double> coords(static_cast<std::size_t>(f.dim()));
    std::vector<int> counts(static_cast<std::size_t>(f.dim()));
    std::int64_t total = 1;
    for (int i = 0; i < f.dim(); ++i) {
      counts[static_cast<std::size_t>(i)] =
          std::max(2, static_cast<int>(std::llround((hi[i] - lo[i]) / spacing)) + 1);
      total *= counts[static_cast<std::size_t>(i)];
    }
    for (std::int64_t flat = 0; flat < total; ++flat) {
      std::int64_t rest = flat;
      Vec x(f.dim());
      for (int i = f.dim() - 1; i >= 0; --i) {
        const int nn = counts[static_cast<std::size_t>(i)];
        x[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(rest % nn) /
                           static_cast<double>(nn - 1);
        rest /= nn;
      }
      const Vec hv = H(x);
      sup = std::max(sup, (net.forward(x) - hv).cwiseAbs().maxCoeff());
      const Label fx = f.evaluate(x);
      if (fx == kOutsideLabel) continue;
      const DistanceEstimate est = H.h(x);
      if (!(est.value - est.error_bound > eps)) continue;
      ++stable;
      if (class_prediction(net.forward(x)) == H.slot_of(fx)) ++matched;
    }
    const double fraction =
        stable == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(stable);
    nlohmann::json j;
    j["sup_error"] = sup;
    j["target"] = 0.5 * eps;
    j["stable_points"] = stable;
    j["interpolation_fraction"] = fraction;
    const bool pass = sup < 0.5 * eps && fraction == 1.0;
    j["pass"] = pass;
    emit(j, out_path);
    if (!pass) std::exit(1);
  });

  // --- reproduce ----------------------------------------------------------------------
  auto* rep_cmd = app.add_subcommand("reproduce", "run the full reproduction table");
  std::string rep_out = "report";
  rep_cmd->add_option("--seed", seed, "master seed");
  rep_cmd->add_option("--out", rep_out, "output base path (.json/.csv)");
  rep_cmd->callback([&] {
    const ReproductionReport report = run_reproduction(seed);
    write_report_json(report, rep_out + ".json");
    write_report_csv(report, rep_out + ".csv");
    for (const auto& c : report.cases)
      std::cout << (c.status == "fail" ? "[FAIL] " : "[ ok ] ") << c.name << "  "
                << c.status << "\n";
    if (!report.all_pass()) {
      std::cerr << "failing cases:";
      for (const auto& name : report.failing_cases()) std::cerr << " " << name;
      std::cerr << "\n";
      std::exit(1);
    }
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}
