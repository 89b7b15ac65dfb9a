#include "classtab/train.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "classtab/rng.hpp"

namespace classtab {

namespace {

Mat grid_points(const Vec& lo, const Vec& hi, double spacing) {
  const int d = static_cast<int>(lo.size());
  std::vector<int> counts(static_cast<std::size_t>(d));
  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) {
    const int n = std::max(2, static_cast<int>(std::llround((hi[i] - lo[i]) / spacing)) + 1);
    counts[static_cast<std::size_t>(i)] = n;
    total *= n;
  }
  Mat X(total, d);
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t rest = flat;
    for (int i = d - 1; i >= 0; --i) {
      const int n = counts[static_cast<std::size_t>(i)];
      const std::int64_t k = rest % n;
      rest /= n;
      X(flat, i) = lo[i] + (hi[i] - lo[i]) * static_cast<double>(k) /
                               static_cast<double>(n - 1);
    }
  }
  return X;
}

Mat h_targets(const HField& H, const Mat& X) {
  Mat Y(X.rows(), H.q());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    Y.row(i) = H(X.row(i).transpose()).transpose();
  return Y;
}

void activate(Activation a, Mat& Z) {
  switch (a) {
    case Activation::relu: Z = Z.cwiseMax(0.0); break;
    case Activation::tanh_fn: Z = Z.array().tanh().matrix(); break;
    case Activation::sigmoid: Z = (1.0 / (1.0 + (-Z.array()).exp())).matrix(); break;
  }
}

/// Random hidden stack: unit-direction rows with kinks spread over the box.
std::vector<DenseLayer> random_hidden(int d, const std::vector<int>& widths,
                                      Activation act, const Vec& lo, const Vec& hi,
                                      Rng& rng) {
  std::vector<DenseLayer> layers;
  int fan_in = d;
  for (std::size_t l = 0; l < widths.size(); ++l) {
    const int w = widths[l];
    DenseLayer layer;
    layer.W.resize(w, fan_in);
    layer.b.resize(w);
    for (int r = 0; r < w; ++r) {
      Vec dir(fan_in);
      for (int c = 0; c < fan_in; ++c) dir[c] = rng.normal();
      const double n = dir.norm();
      if (n > 0) dir /= n;
      if (l == 0) {
        // first layer: hyperplane through a random point of the box
        layer.W.row(r) = dir.transpose();
        Vec anchor(fan_in);
        for (int c = 0; c < fan_in; ++c) anchor[c] = rng.uniform(lo[c], hi[c]);
        layer.b[r] = -dir.dot(anchor);
      } else {
        const double scale =
            act == Activation::relu ? std::sqrt(2.0 / fan_in) : 1.0 / std::sqrt(fan_in);
        layer.W.row(r) = (scale * std::sqrt(static_cast<double>(fan_in))) * dir.transpose();
        layer.b[r] = 0.1 * rng.normal();
      }
    }
    layers.push_back(std::move(layer));
    fan_in = w;
  }
  return layers;
}

/// Ridge least-squares readout on the deepest activations.
DenseLayer lsq_readout(const Mat& A, const Mat& Y, double ridge) {
  const Eigen::Index w = A.cols();
  Mat Aug(A.rows(), w + 1);
  Aug.leftCols(w) = A;
  Aug.col(w).setOnes();
  Mat gram = Aug.transpose() * Aug;
  gram.diagonal().array() += ridge * static_cast<double>(A.rows());
  const Mat C = gram.ldlt().solve(Aug.transpose() * Y);  // (w+1) x q
  DenseLayer out;
  out.W = C.topRows(w).transpose();
  out.b = C.bottomRows(1).transpose();
  return out;
}

struct AdamState {
  std::vector<Mat> mW, vW;
  std::vector<Vec> mb, vb;
  std::int64_t t = 0;

  explicit AdamState(const std::vector<DenseLayer>& layers) {
    for (const auto& l : layers) {
      mW.push_back(Mat::Zero(l.W.rows(), l.W.cols()));
      vW.push_back(Mat::Zero(l.W.rows(), l.W.cols()));
      mb.push_back(Vec::Zero(l.b.size()));
      vb.push_back(Vec::Zero(l.b.size()));
    }
  }

  void step(std::vector<DenseLayer>& layers, const std::vector<Mat>& gW,
            const std::vector<Vec>& gb, double lr) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    ++t;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
    for (std::size_t l = 0; l < layers.size(); ++l) {
      mW[l] = b1 * mW[l] + (1.0 - b1) * gW[l];
      vW[l] = b2 * vW[l].array().matrix() + (1.0 - b2) * gW[l].cwiseProduct(gW[l]);
      layers[l].W.array() -=
          lr * (mW[l].array() / c1) / ((vW[l].array() / c2).sqrt() + eps);
      mb[l] = b1 * mb[l] + (1.0 - b1) * gb[l];
      vb[l] = b2 * vb[l].array().matrix() + (1.0 - b2) * gb[l].cwiseProduct(gb[l]);
      layers[l].b.array() -=
          lr * (mb[l].array() / c1) / ((vb[l].array() / c2).sqrt() + eps);
    }
  }
};

/// Preallocated buffers for the full-batch fit loop: one activation and
/// one gradient matrix per hidden layer, reused across iterations.
struct FitWorkspace {
  std::vector<Mat> A;  // post-activation outputs per hidden layer
  std::vector<Mat> G;  // backpropagated gradients per hidden layer
  Mat out;             // network output
  Mat e;               // residual
  Mat dOut;            // loss gradient at the output

  FitWorkspace(const std::vector<DenseLayer>& layers, Eigen::Index n) {
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
      A.emplace_back(n, layers[l].W.rows());
      G.emplace_back(n, layers[l].W.rows());
    }
    out.resize(n, layers.back().W.rows());
    e.resize(n, layers.back().W.rows());
    dOut.resize(n, layers.back().W.rows());
  }
};

void forward_ws(const std::vector<DenseLayer>& layers, Activation act, const Mat& X,
                FitWorkspace& ws) {
  const Mat* in = &X;
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    ws.A[l].noalias() = (*in) * layers[l].W.transpose();
    ws.A[l].rowwise() += layers[l].b.transpose();
    activate(act, ws.A[l]);
    in = &ws.A[l];
  }
  ws.out.noalias() = (*in) * layers.back().W.transpose();
  ws.out.rowwise() += layers.back().b.transpose();
}

void backward_ws(const std::vector<DenseLayer>& layers, Activation act, const Mat& X,
                 FitWorkspace& ws, std::vector<Mat>& gW, std::vector<Vec>& gb) {
  const std::size_t L = layers.size();
  const Mat& a_last = L >= 2 ? ws.A[L - 2] : X;
  gW[L - 1].noalias() = ws.dOut.transpose() * a_last;
  gb[L - 1] = ws.dOut.colwise().sum().transpose();
  if (L == 1) return;
  ws.G[L - 2].noalias() = ws.dOut * layers[L - 1].W;
  for (std::size_t l = L - 1; l-- > 0;) {
    switch (act) {
      case Activation::relu:
        ws.G[l].array() *= (ws.A[l].array() > 0.0).cast<double>();
        break;
      case Activation::tanh_fn:
        ws.G[l].array() *= 1.0 - ws.A[l].array().square();
        break;
      case Activation::sigmoid:
        ws.G[l].array() *= ws.A[l].array() * (1.0 - ws.A[l].array());
        break;
    }
    const Mat& a_prev = l >= 1 ? ws.A[l - 1] : X;
    gW[l].noalias() = ws.G[l].transpose() * a_prev;
    gb[l] = ws.G[l].colwise().sum().transpose();
    if (l >= 1) ws.G[l - 1].noalias() = ws.G[l] * layers[l].W;
  }
}

/// Writes the gradient of the annealed soft-max surrogate of max|e| into
/// ws.dOut and returns the true sup.
double softmax_abs_grad(FitWorkspace& ws) {
  const double m = ws.e.cwiseAbs().maxCoeff();
  if (m <= 0.0) {
    ws.dOut.setZero();
    return m;
  }
  const double beta = 16.0 / m;
  ws.dOut = ((ws.e.cwiseAbs().array() - m) * beta).exp().matrix();
  const double s = ws.dOut.sum();
  ws.dOut.array() *= ws.e.cwiseSign().array() / s;
  return m;
}

struct FitResult {
  std::vector<DenseLayer> layers;
  double train_sup = std::numeric_limits<double>::infinity();
  std::int64_t iterations = 0;
  bool verified = false;
};

/// Two-phase full-batch fit: mean-square warm-up then sup-norm polish.
/// When the training sup improves below check_gate the on_check hook
/// runs (at most every 50 iterations); returning true stops the fit.
FitResult fit_stack(std::vector<DenseLayer> layers, Activation act, const Mat& X,
                    const Mat& Y, std::int64_t budget, double check_gate,
                    const std::function<bool(const std::vector<DenseLayer>&)>& on_check = {}) {
  FitResult best;
  best.layers = layers;
  std::vector<Mat> gW(layers.size());
  std::vector<Vec> gb(layers.size());
  AdamState adam(layers);
  FitWorkspace ws(layers, X.rows());
  const std::int64_t warm = budget * 2 / 5;
  const double n = static_cast<double>(X.rows());
  const bool log = std::getenv("CLASSTAB_TRAIN_LOG") != nullptr;
  double checked_at = std::numeric_limits<double>::infinity();
  std::int64_t last_check = -50;

  for (std::int64_t it = 0; it < budget; ++it) {
    forward_ws(layers, act, X, ws);
    ws.e = ws.out - Y;
    double sup;
    if (it < warm) {
      sup = ws.e.cwiseAbs().maxCoeff();
      ws.dOut = (2.0 / n) * ws.e;
    } else {
      sup = softmax_abs_grad(ws);
    }
    if (sup < best.train_sup) {
      best.train_sup = sup;
      best.layers = layers;
    }
    best.iterations = it + 1;
    if (log && it % 100 == 0)
      std::fprintf(stderr, "  it %6lld  sup %.5f (best %.5f)\n",
                   static_cast<long long>(it), sup, best.train_sup);
    if (!on_check && best.train_sup < check_gate) break;  // plain stop threshold
    if (on_check && best.train_sup < check_gate &&
        best.train_sup < 0.98 * checked_at && it - last_check >= 50) {
      checked_at = best.train_sup;
      last_check = it;
      if (on_check(best.layers)) {
        best.verified = true;
        return best;
      }
    }
    backward_ws(layers, act, X, ws, gW, gb);
    const double progress = static_cast<double>(it) / static_cast<double>(budget);
    const double lr = (it < warm ? 3e-3 : 1e-3) *
                      (0.5 * (1.0 + std::cos(M_PI * progress)) * 0.9 + 0.1);
    adam.step(layers, gW, gb, lr);
  }
  if (on_check && !best.verified && best.train_sup < check_gate &&
      on_check(best.layers))
    best.verified = true;
  return best;
}

struct InterpolationCheck {
  double fraction = 1.0;
  std::int64_t points = 0;
  bool vacuous = false;
};

InterpolationCheck check_interpolation(const Mlp& net, const HField& H,
                                       double epsilon, double spacing) {
  const ExtendedField& field = H.field();
  auto [lo, hi] = field.domain().bounding_box();
  const Mat X = grid_points(lo, hi, spacing);
  InterpolationCheck c;
  std::int64_t hits = 0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const Vec x = X.row(i).transpose();
    const Label fx = field.evaluate(x);
    if (fx == kOutsideLabel) continue;
    const DistanceEstimate est = H.h(x);
    if (!(est.value - est.error_bound > epsilon)) continue;
    ++c.points;
    if (class_prediction(net.forward(x)) == H.slot_of(fx)) ++hits;
  }
  if (c.points == 0) {
    c.vacuous = true;
    c.fraction = 1.0;
  } else {
    c.fraction = static_cast<double>(hits) / static_cast<double>(c.points);
  }
  return c;
}

std::pair<Mlp, TrainReport> train_stack(const ExtendedField& field, const Domain& K,
                                        const NormP& p, double epsilon,
                                        const std::vector<int>& widths,
                                        const TrainOptions& opts) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("train: epsilon must be > 0");
  if (K.kind() == Domain::Kind::finite_set)
    throw std::invalid_argument("train: K must be a box or ball");

  const HField H(field, p, opts.boundary_mode, opts.dist);
  auto [lo, hi] = K.bounding_box();
  const double extent = (hi - lo).maxCoeff();
  const double train_spacing =
      opts.train_spacing > 0.0 ? opts.train_spacing : extent / 128.0;
  const double verify_spacing = train_spacing / 4.0;
  const double meps_spacing =
      opts.meps_spacing > 0.0 ? opts.meps_spacing : extent / 200.0;

  const Mat X = grid_points(lo, hi, train_spacing);
  const Mat Y = h_targets(H, X);
  const double target = 0.5 * epsilon;

  // verification grid, 4x finer than the training grid, precomputed once
  const Mat Xv = grid_points(lo, hi, verify_spacing);
  const Mat Yv = h_targets(H, Xv);
  Vec cell(X.cols());
  for (Eigen::Index i = 0; i < X.cols(); ++i) {
    const int nn =
        std::max(2, static_cast<int>(std::llround((hi[i] - lo[i]) / verify_spacing)) + 1);
    cell[i] = (hi[i] - lo[i]) / static_cast<double>(nn - 1);
  }
  const double off_grid_bound = p.norm(cell);

  Mlp net;
  net.activation = opts.activation;
  net.slot_labels = H.slot_labels();

  TrainReport report;
  report.target = target;
  report.off_grid_bound = off_grid_bound;
  double best_sup = std::numeric_limits<double>::infinity();

  const auto verified_sup = [&](const std::vector<DenseLayer>& layers) {
    Mlp candidate;
    candidate.activation = opts.activation;
    candidate.layers = layers;
    return (candidate.forward_batch(Xv) - Yv).cwiseAbs().maxCoeff() + off_grid_bound;
  };

  const int restarts = std::max(1, opts.max_restarts);
  const std::int64_t budget_per = std::max<std::int64_t>(1, opts.budget / restarts);
  for (int attempt = 0; attempt < restarts; ++attempt) {
    Rng rng(opts.seed, 0x7472616eULL + 977u * static_cast<std::uint64_t>(attempt));
    auto layers = random_hidden(static_cast<int>(X.cols()), widths, opts.activation,
                                lo, hi, rng);
    {
      // least-squares readout on the random features
      Mat A = X;
      for (const auto& l : layers) {
        Mat Z = (A * l.W.transpose()).rowwise() + l.b.transpose();
        activate(opts.activation, Z);
        A = std::move(Z);
      }
      layers.push_back(lsq_readout(A, Y, opts.ridge));
    }
    // a training sup this far below target is worth a full verification
    const double check_gate = std::max(0.0, target - off_grid_bound);
    const FitResult fit = fit_stack(
        std::move(layers), opts.activation, X, Y, budget_per, check_gate,
        [&](const std::vector<DenseLayer>& candidate) {
          const double sup = verified_sup(candidate);
          if (sup < best_sup) {
            best_sup = sup;
            net.layers = candidate;
          }
          return sup < 0.93 * target;  // stop once comfortably below
        });
    report.iterations += fit.iterations;
    if (!fit.verified) {
      const double sup = verified_sup(fit.layers);
      if (sup < best_sup) {
        best_sup = sup;
        net.layers = fit.layers;
      }
    }
    if (best_sup < target) break;
  }

  report.sup_error = best_sup;
  report.grid_sup_error = best_sup - off_grid_bound;
  report.reached_target = best_sup < target;

  const InterpolationCheck ic = check_interpolation(net, H, epsilon, meps_spacing);
  report.interpolation_fraction = ic.fraction;
  report.stable_points = ic.points;
  report.vacuous = ic.vacuous;
  return {std::move(net), report};
}

}  // namespace

Domain default_training_box(const ExtendedField& field, double epsilon) {
  auto [lo, hi] = field.domain().bounding_box(epsilon);
  return Domain::box(lo, hi);
}

// ---------------------------------------------------------------------------
// Rounding construction
// ---------------------------------------------------------------------------

LabelSurrogate::LabelSurrogate(const ExtendedField& field, double xi, const NormP& p,
                               double grid_spacing, const DistanceOptions& opts)
    : field_(field), xi_(xi), p_(p) {
  if (!(xi > 0.0)) throw std::invalid_argument("LabelSurrogate: xi must be > 0");
  const HField H(field, p, BoundaryMode::extension, opts);
  q_ = H.q();
  // stable members per slot, over the domain box inflated enough that the
  // outside region (slot 1) is represented as well
  const double margin = std::max(4.0 * xi, 2.0 * grid_spacing);
  auto [lo, hi] = field.domain().bounding_box(margin);
  const Mat X = grid_points(lo, hi, grid_spacing);
  std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(q_));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const Vec x = X.row(i).transpose();
    const DistanceEstimate est = boundary_h(field, x, p, BoundaryMode::extension, opts);
    if (!(est.value - est.error_bound > xi)) continue;
    const int s = H.slot_of(field.evaluate(x));
    members[static_cast<std::size_t>(s - 1)].push_back(i);
  }
  slot_trees_.resize(static_cast<std::size_t>(q_));
  for (int s = 0; s < q_; ++s) {
    const auto& rows = members[static_cast<std::size_t>(s)];
    if (rows.empty()) continue;
    Mat pts(static_cast<Eigen::Index>(rows.size()), X.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
      pts.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
    slot_trees_[static_cast<std::size_t>(s)] =
        std::make_shared<const KdTree>(std::move(pts));
  }
}

double LabelSurrogate::operator()(const VecCRef& x) const {
  double wsum = 0.0, val = 0.0;
  for (int s = 0; s < q_; ++s) {
    const auto& tree = slot_trees_[static_cast<std::size_t>(s)];
    if (!tree) continue;
    const double d = tree->nearest_distance(x, p_);
    const double w = std::max(0.0, 1.0 - d / (2.0 * xi_));
    wsum += w;
    val += w * static_cast<double>(s + 1);
  }
  if (wsum <= 0.0) {
    // deep in an unresolved area: fall back to the slot of the raw label
    const auto slots = field_.extended_labels();
    const Label fx = field_.evaluate(x);
    const auto it = std::find(slots.begin(), slots.end(), fx);
    return static_cast<double>(it - slots.begin()) + 1.0;
  }
  return val / wsum;
}

std::pair<Mlp, TrainReport> train_rounding(const ExtendedField& field, const Domain& K,
                                           const NormP& p, double xi,
                                           const TrainOptions& opts) {
  if (!(xi > 0.0)) throw std::invalid_argument("train_rounding: xi must be > 0");
  const HField H(field, p, BoundaryMode::extension, opts.dist);
  const int q = H.q();
  auto [lo, hi] = K.bounding_box();
  const double extent = (hi - lo).maxCoeff();
  const double train_spacing =
      opts.train_spacing > 0.0 ? opts.train_spacing : std::min(extent / 128.0, xi / 2.0);
  const double meps_spacing =
      opts.meps_spacing > 0.0 ? opts.meps_spacing : extent / 200.0;

  // the surrogate's stable sets are resolved finer than the training
  // grid so the blend midline tracks the true boundary
  const double surrogate_spacing = std::min(train_spacing, xi / 5.0);
  const LabelSurrogate g(field, xi, p, surrogate_spacing, opts.dist);
  const Mat X = grid_points(lo, hi, train_spacing);
  Mat Y(X.rows(), q);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double v = g(X.row(i).transpose());
    for (int j = 1; j <= q; ++j) Y(i, j - 1) = omega(j, v);
  }

  TrainReport report;
  report.target = 0.5;  // the uniform-norm margin of the rounding argument
  constexpr double kGridTarget = 0.35;

  Mlp net;
  net.activation = opts.activation;
  net.slot_labels = H.slot_labels();
  double best_sup = std::numeric_limits<double>::infinity();
  const int restarts = std::max(1, opts.max_restarts);
  const std::int64_t budget_per = std::max<std::int64_t>(1, opts.budget / restarts);
  for (int attempt = 0; attempt < restarts; ++attempt) {
    Rng rng(opts.seed, 0x726f756eULL + 977u * static_cast<std::uint64_t>(attempt));
    auto layers = random_hidden(static_cast<int>(X.cols()), {opts.width},
                                opts.activation, lo, hi, rng);
    {
      Mat A = (X * layers[0].W.transpose()).rowwise() + layers[0].b.transpose();
      activate(opts.activation, A);
      layers.push_back(lsq_readout(A, Y, opts.ridge));
    }
    const FitResult fit = fit_stack(std::move(layers), opts.activation, X, Y,
                                    budget_per, 0.8 * kGridTarget);
    report.iterations += fit.iterations;
    if (fit.train_sup < best_sup) {
      best_sup = fit.train_sup;
      net.layers = fit.layers;
    }
    if (best_sup < 0.8 * kGridTarget) break;
  }

  // verification against the rounded target on a finer grid
  const double verify_spacing = train_spacing / 2.0;
  const Mat Xv = grid_points(lo, hi, verify_spacing);
  double grid_sup = 0.0;
  {
    const Mat P = net.forward_batch(Xv);
    for (Eigen::Index i = 0; i < Xv.rows(); ++i) {
      const double v = g(Xv.row(i).transpose());
      for (int j = 1; j <= q; ++j)
        grid_sup = std::max(grid_sup, std::abs(P(i, j - 1) - omega(j, v)));
    }
  }
  report.grid_sup_error = grid_sup;
  // G is bounded in [0,1] and its slope is at most the largest slot gap
  // over 2 xi, so the off-grid term is the smaller of the two
  const double lip_g = static_cast<double>(q - 1) / (2.0 * xi);
  Vec cell(X.cols());
  for (Eigen::Index i = 0; i < X.cols(); ++i) {
    const int nn =
        std::max(2, static_cast<int>(std::llround((hi[i] - lo[i]) / verify_spacing)) + 1);
    cell[i] = (hi[i] - lo[i]) / static_cast<double>(nn - 1);
  }
  report.off_grid_bound = std::min(1.0, lip_g * p.norm(cell));
  report.sup_error = grid_sup + report.off_grid_bound;

  const InterpolationCheck ic = check_interpolation(net, H, xi, meps_spacing);
  report.interpolation_fraction = ic.fraction;
  report.stable_points = ic.points;
  report.vacuous = ic.vacuous;
  report.reached_target = grid_sup < kGridTarget && ic.fraction == 1.0;
  return {std::move(net), report};
}

std::pair<Mlp, TrainReport> train_shallow(const ExtendedField& field, const Domain& K,
                                          const NormP& p, double epsilon,
                                          const TrainOptions& opts) {
  if (opts.width < 1) throw std::invalid_argument("train_shallow: width >= 1 required");
  return train_stack(field, K, p, epsilon, {opts.width}, opts);
}

std::pair<Mlp, TrainReport> train_narrow_deep(const ExtendedField& field,
                                              const Domain& K, const NormP& p,
                                              double epsilon, const TrainOptions& opts) {
  const int q = static_cast<int>(field.extended_labels().size());
  const int width = field.dim() + q + 2;
  TrainReport cumulative;
  Mlp best_net;
  double best_sup = std::numeric_limits<double>::infinity();
  for (int depth = 1; depth <= std::max(1, opts.depth_budget); ++depth) {
    auto [net, report] =
        train_stack(field, K, p, epsilon, std::vector<int>(depth, width), opts);
    cumulative.iterations += report.iterations;
    if (report.sup_error < best_sup) {
      best_sup = report.sup_error;
      best_net = std::move(net);
      const std::int64_t iters = cumulative.iterations;
      cumulative = report;
      cumulative.iterations = iters;
    }
    if (cumulative.reached_target) break;
  }
  return {std::move(best_net), cumulative};
}

LabelField net_as_field(const Mlp& net, const Domain& domain,
                        std::vector<int> scan_resolution) {
  const int q = net.output_dim();
  OracleField o;
  o.domain = domain;
  o.scan_resolution = std::move(scan_resolution);
  o.evaluate = [net](const VecCRef& x) {
    return static_cast<Label>(class_prediction(net.forward(x)));
  };
  std::vector<Label> slots(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) slots[static_cast<std::size_t>(i)] = i + 1;
  return LabelField(std::move(o), std::move(slots), "net");
}

StabilityEstimate stability_of_net(const Mlp& net, const Domain& domain,
                                   const NormP& p, DistanceMode mode,
                                   BoundaryMode boundary_mode, Integrator integrator,
                                   const StabilityOptions& opts,
                                   std::vector<int> scan_resolution) {
  const ExtendedField f = extend(net_as_field(net, domain, std::move(scan_resolution)));
  return class_stability(f, p, mode, boundary_mode, integrator, opts);
}

}  // namespace classtab
