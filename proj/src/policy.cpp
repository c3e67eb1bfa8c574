#include "symreg/policy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace symreg {

const char* trainer_name(Trainer t) {
  switch (t) {
    case Trainer::kVpg: return "vpg";
    case Trainer::kRspg: return "rspg";
    case Trainer::kPqt: return "pqt";
  }
  return "?";
}

Trainer trainer_from_name(std::string_view name) {
  if (name == "vpg") return Trainer::kVpg;
  if (name == "rspg") return Trainer::kRspg;
  if (name == "pqt") return Trainer::kPqt;
  throw std::invalid_argument("unknown trainer: " + std::string(name));
}

void PriorityQueue::update(std::span<const Traversal> ts,
                           std::span<const double> rewards) {
  if (ts.size() != rewards.size()) {
    throw std::invalid_argument("queue update: size mismatch");
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    bool duplicate = false;
    for (const Entry& e : entries_) {
      if (e.t == ts[i]) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    entries_.push_back(Entry{ts[i], rewards[i], next_seq_++});
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) {
              if (a.reward != b.reward) return a.reward > b.reward;
              return a.seq < b.seq;
            });
  if (static_cast<int>(entries_.size()) > capacity_) {
    entries_.resize(capacity_);
  }
}

double empirical_quantile(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty set");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const int n = static_cast<int>(sorted.size());
  double pos = q * (n - 1);
  int lo = static_cast<int>(std::floor(pos));
  lo = std::clamp(lo, 0, n - 1);
  int hi = std::min(lo + 1, n - 1);
  double frac = pos - lo;
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace {

inline Eigen::ArrayXXd sigmoid(const Eigen::ArrayXXd& z) {
  return 1.0 / (1.0 + (-z).exp());
}

// Per-row masked softmax summary; log p_j = z_j - max_z - log_sum.
struct SoftmaxRow {
  double max_z;
  double sum;      // of exp(z_j - max_z) over allowed j
  double entropy;  // of the masked distribution
};

SoftmaxRow masked_softmax_row(const Eigen::RowVectorXd& z,
                              std::uint64_t mask) {
  SoftmaxRow s{-std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (int j = 0; j < z.size(); ++j) {
    if ((mask >> j) & 1) s.max_z = std::max(s.max_z, z[j]);
  }
  double weighted = 0.0;  // sum e_j * (z_j - max_z)
  for (int j = 0; j < z.size(); ++j) {
    if (!((mask >> j) & 1)) continue;
    double e = std::exp(z[j] - s.max_z);
    s.sum += e;
    weighted += e * (z[j] - s.max_z);
  }
  s.entropy = std::log(s.sum) - weighted / s.sum;
  return s;
}

}  // namespace

Policy::Policy(TokenLibrary lib, ConstraintSet omega, int hidden_size,
               std::uint64_t init_seed)
    : lib_(std::move(lib)), omega_(omega), hidden_(hidden_size) {
  const int v = lib_.size();
  if (v > 64) throw std::invalid_argument("library exceeds 64 tokens");
  input_dim_ = 2 * (v + 1);
  const int h = hidden_;

  Rng rng(Rng::mix(init_seed, 0x9057));
  double k = 1.0 / std::sqrt(static_cast<double>(h));
  auto init = [&](Eigen::MatrixXd& m, int rows, int cols) {
    m.resize(rows, cols);
    for (int c = 0; c < cols; ++c) {
      for (int r = 0; r < rows; ++r) m(r, c) = rng.uniform(-k, k);
    }
  };
  init(p_.w_x, 4 * h, input_dim_);
  init(p_.w_h, 4 * h, h);
  p_.b = Eigen::VectorXd::Zero(4 * h);
  p_.b.segment(h, h).setConstant(1.0);  // forget-gate bias
  // Zero output projection plus a bias that makes the arity classes
  // equiprobable. A prior uniform over tokens would drift nearly every
  // sample to the length cap whenever operators outnumber terminals,
  // and a batch of cap-length expressions is a degenerate starting
  // population for the evolutionary phase.
  p_.w_out = Eigen::MatrixXd::Zero(v, h);
  p_.b_out.resize(v);
  std::array<int, 3> per_arity{};
  for (int j = 0; j < v; ++j) per_arity[lib_.arity(static_cast<TokenId>(j))]++;
  for (int j = 0; j < v; ++j) {
    int n = per_arity[lib_.arity(static_cast<TokenId>(j))];
    p_.b_out[j] = -std::log(static_cast<double>(n));
  }

  auto zeros_like = [](const Params& src) {
    Params z;
    z.w_x = Eigen::MatrixXd::Zero(src.w_x.rows(), src.w_x.cols());
    z.w_h = Eigen::MatrixXd::Zero(src.w_h.rows(), src.w_h.cols());
    z.b = Eigen::VectorXd::Zero(src.b.size());
    z.w_out = Eigen::MatrixXd::Zero(src.w_out.rows(), src.w_out.cols());
    z.b_out = Eigen::VectorXd::Zero(src.b_out.size());
    return z;
  };
  adam_m_ = zeros_like(p_);
  adam_v_ = zeros_like(p_);
}

Eigen::VectorXd Policy::input_row(TokenId parent, TokenId sibling) const {
  const int v = lib_.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(input_dim_);
  x[parent == kNoToken ? v : parent] = 1.0;
  x[(v + 1) + (sibling == kNoToken ? v : sibling)] = 1.0;
  return x;
}

std::vector<Traversal> Policy::sample_batch(int n, Rng& rng) const {
  std::vector<Traversal> out;
  if (n <= 0) return out;
  const int v = lib_.size();
  const int h = hidden_;

  std::uint64_t base = rng.next_u64();
  std::vector<Rng> streams;
  streams.reserve(n);
  for (int i = 0; i < n; ++i) streams.push_back(Rng::substream(base, i));

  std::vector<TraversalBuilder> builders(n, TraversalBuilder(lib_));
  Eigen::MatrixXd hs = Eigen::MatrixXd::Zero(n, h);
  Eigen::MatrixXd cs = Eigen::MatrixXd::Zero(n, h);
  Eigen::MatrixXd x(n, input_dim_);
  std::vector<double> probs(v);

  int active = n;
  int guard = 0;
  while (active > 0) {
    if (++guard > omega_.max_length + 2) {
      throw std::logic_error("sampling failed to terminate");
    }
    x.setZero();
    for (int r = 0; r < n; ++r) {
      if (builders[r].done()) continue;
      x.row(r) = input_row(builders[r].parent(), builders[r].sibling());
    }
    Eigen::MatrixXd gates = x * p_.w_x.transpose() + hs * p_.w_h.transpose();
    gates.rowwise() += p_.b.transpose();
    Eigen::ArrayXXd gi = sigmoid(gates.leftCols(h).array());
    Eigen::ArrayXXd gf = sigmoid(gates.middleCols(h, h).array());
    Eigen::ArrayXXd gg = gates.middleCols(2 * h, h).array().tanh();
    Eigen::ArrayXXd go = sigmoid(gates.rightCols(h).array());
    cs = (gf * cs.array() + gi * gg).matrix();
    hs = (go * cs.array().tanh()).matrix();
    Eigen::MatrixXd logits = hs * p_.w_out.transpose();
    logits.rowwise() += p_.b_out.transpose();

    for (int r = 0; r < n; ++r) {
      if (builders[r].done()) continue;
      std::uint64_t mask = allowed_tokens(builders[r], omega_);
      SoftmaxRow s = masked_softmax_row(logits.row(r), mask);
      for (int j = 0; j < v; ++j) {
        probs[j] = ((mask >> j) & 1)
                       ? std::exp(logits(r, j) - s.max_z) / s.sum
                       : 0.0;
      }
      TokenId pick =
          static_cast<TokenId>(streams[r].categorical(probs.data(), v));
      builders[r].push(pick);
      if (builders[r].done()) --active;
    }
  }

  out.reserve(n);
  for (int r = 0; r < n; ++r) out.push_back(builders[r].tokens());
  return out;
}

// Shared sequential replay for loss, gradients and per-sequence scores.
Policy::ReplayOutcome Policy::replay(std::span<const SeqWeight> seqs,
                                     Params* grad) const {
  const int v = lib_.size();
  const int h = hidden_;
  const int b = static_cast<int>(seqs.size());

  // Structural prep: per-sequence step contexts and masks.
  int t_max = 0;
  struct Step {
    TokenId parent, sibling, token;
    std::uint64_t mask;
  };
  std::vector<std::vector<Step>> steps(b);
  ReplayOutcome out;
  out.per_seq.resize(b);
  out.valid.assign(b, true);
  for (int s = 0; s < b; ++s) {
    const Traversal& t = *seqs[s].t;
    if (!is_complete(lib_, t)) {
      throw std::invalid_argument("replay: traversal is not complete");
    }
    TraversalBuilder builder(lib_);
    steps[s].reserve(t.size());
    for (TokenId id : t) {
      std::uint64_t mask = allowed_tokens(builder, omega_);
      steps[s].push_back(Step{builder.parent(), builder.sibling(), id, mask});
      if (!((mask >> id) & 1)) {
        out.valid[s] = false;
        ++out.n_invalid;
        break;
      }
      builder.push(id);
    }
    if (!out.valid[s]) {
      out.per_seq[s] = {-std::numeric_limits<double>::infinity(), 0.0};
      steps[s].clear();
      continue;
    }
    t_max = std::max(t_max, static_cast<int>(steps[s].size()));
  }

  struct StepCache {
    Eigen::MatrixXd x, h_prev, c_prev, gi, gf, gg, go, c, tc, h, z;
  };
  std::vector<StepCache> caches;
  if (grad != nullptr) caches.resize(t_max);

  Eigen::MatrixXd hs = Eigen::MatrixXd::Zero(b, h);
  Eigen::MatrixXd cs = Eigen::MatrixXd::Zero(b, h);
  Eigen::MatrixXd x(b, input_dim_);

  // Per-step softmax summaries, reused by the backward pass.
  std::vector<std::vector<SoftmaxRow>> softmax(t_max,
                                               std::vector<SoftmaxRow>(b));

  for (int t = 0; t < t_max; ++t) {
    x.setZero();
    for (int s = 0; s < b; ++s) {
      if (t >= static_cast<int>(steps[s].size())) continue;
      x.row(s) = input_row(steps[s][t].parent, steps[s][t].sibling);
    }
    Eigen::MatrixXd h_prev = hs;
    Eigen::MatrixXd c_prev = cs;
    Eigen::MatrixXd gates = x * p_.w_x.transpose() + hs * p_.w_h.transpose();
    gates.rowwise() += p_.b.transpose();
    Eigen::ArrayXXd gi = sigmoid(gates.leftCols(h).array());
    Eigen::ArrayXXd gf = sigmoid(gates.middleCols(h, h).array());
    Eigen::ArrayXXd gg = gates.middleCols(2 * h, h).array().tanh();
    Eigen::ArrayXXd go = sigmoid(gates.rightCols(h).array());
    cs = (gf * c_prev.array() + gi * gg).matrix();
    Eigen::MatrixXd tc = cs.array().tanh().matrix();
    hs = (go.array() * tc.array()).matrix();
    Eigen::MatrixXd z = hs * p_.w_out.transpose();
    z.rowwise() += p_.b_out.transpose();

    for (int s = 0; s < b; ++s) {
      if (t >= static_cast<int>(steps[s].size())) continue;
      SoftmaxRow sm = masked_softmax_row(z.row(s), steps[s][t].mask);
      softmax[t][s] = sm;
      double log_p = z(s, steps[s][t].token) - sm.max_z - std::log(sm.sum);
      out.per_seq[s].log_prob += log_p;
      out.per_seq[s].entropy += sm.entropy;
    }

    if (grad != nullptr) {
      StepCache& cache = caches[t];
      cache.x = x;
      cache.h_prev = std::move(h_prev);
      cache.c_prev = std::move(c_prev);
      cache.gi = gi.matrix();
      cache.gf = gf.matrix();
      cache.gg = gg.matrix();
      cache.go = go.matrix();
      cache.c = cs;
      cache.tc = tc;
      cache.h = hs;
      cache.z = std::move(z);
    }
  }

  double loss = 0.0;
  for (int s = 0; s < b; ++s) {
    if (!out.valid[s]) continue;
    loss += seqs[s].policy_coeff * (-out.per_seq[s].log_prob);
    loss -= seqs[s].entropy_coeff * out.per_seq[s].entropy;
  }
  out.loss = loss;
  if (grad == nullptr) return out;

  // Backward through time.
  grad->w_x = Eigen::MatrixXd::Zero(4 * h, input_dim_);
  grad->w_h = Eigen::MatrixXd::Zero(4 * h, h);
  grad->b = Eigen::VectorXd::Zero(4 * h);
  grad->w_out = Eigen::MatrixXd::Zero(v, h);
  grad->b_out = Eigen::VectorXd::Zero(v);

  Eigen::MatrixXd dh_next = Eigen::MatrixXd::Zero(b, h);
  Eigen::MatrixXd dc_next = Eigen::MatrixXd::Zero(b, h);
  for (int t = t_max - 1; t >= 0; --t) {
    const StepCache& cache = caches[t];
    Eigen::MatrixXd dz = Eigen::MatrixXd::Zero(b, v);
    for (int s = 0; s < b; ++s) {
      if (!out.valid[s] || t >= static_cast<int>(steps[s].size())) continue;
      double a = seqs[s].policy_coeff;
      double e = seqs[s].entropy_coeff;
      if (a == 0.0 && e == 0.0) continue;
      const Step& st = steps[s][t];
      const SoftmaxRow& sm = softmax[t][s];
      for (int j = 0; j < v; ++j) {
        if (!((st.mask >> j) & 1)) continue;
        double log_p = cache.z(s, j) - sm.max_z - std::log(sm.sum);
        double p = std::exp(log_p);
        double g = a * (p - (j == st.token ? 1.0 : 0.0));
        g += e * p * (log_p + sm.entropy);
        dz(s, j) = g;
      }
    }

    grad->w_out.noalias() += dz.transpose() * cache.h;
    grad->b_out += dz.colwise().sum().transpose();
    Eigen::MatrixXd dh = dz * p_.w_out + dh_next;

    Eigen::ArrayXXd d_o = dh.array() * cache.tc.array();
    Eigen::ArrayXXd dzo =
        d_o * cache.go.array() * (1.0 - cache.go.array());
    Eigen::ArrayXXd dc = dh.array() * cache.go.array() *
                             (1.0 - cache.tc.array().square()) +
                         dc_next.array();
    Eigen::ArrayXXd d_i = dc * cache.gg.array();
    Eigen::ArrayXXd dzi = d_i * cache.gi.array() * (1.0 - cache.gi.array());
    Eigen::ArrayXXd d_f = dc * cache.c_prev.array();
    Eigen::ArrayXXd dzf = d_f * cache.gf.array() * (1.0 - cache.gf.array());
    Eigen::ArrayXXd d_g = dc * cache.gi.array();
    Eigen::ArrayXXd dzg = d_g * (1.0 - cache.gg.array().square());

    Eigen::MatrixXd dgates(b, 4 * h);
    dgates.leftCols(h) = dzi.matrix();
    dgates.middleCols(h, h) = dzf.matrix();
    dgates.middleCols(2 * h, h) = dzg.matrix();
    dgates.rightCols(h) = dzo.matrix();

    grad->w_x.noalias() += dgates.transpose() * cache.x;
    grad->w_h.noalias() += dgates.transpose() * cache.h_prev;
    grad->b += dgates.colwise().sum().transpose();

    dh_next = dgates * p_.w_h;
    dc_next = (dc * cache.gf.array()).matrix();
  }
  return out;
}

LogProbEntropy Policy::log_prob_entropy(const Traversal& t) const {
  SeqWeight w{&t, 0.0, 0.0};
  ReplayOutcome out = replay(std::span<const SeqWeight>(&w, 1), nullptr);
  return out.per_seq[0];
}

Eigen::VectorXd Policy::step_probs(const Traversal& prefix) const {
  const int v = lib_.size();
  const int h = hidden_;
  TraversalBuilder builder(lib_);
  Eigen::MatrixXd hs = Eigen::MatrixXd::Zero(1, h);
  Eigen::MatrixXd cs = Eigen::MatrixXd::Zero(1, h);

  auto advance = [&]() {
    Eigen::MatrixXd x(1, input_dim_);
    x.row(0) = input_row(builder.parent(), builder.sibling());
    Eigen::MatrixXd gates = x * p_.w_x.transpose() + hs * p_.w_h.transpose();
    gates.rowwise() += p_.b.transpose();
    Eigen::ArrayXXd gi = sigmoid(gates.leftCols(h).array());
    Eigen::ArrayXXd gf = sigmoid(gates.middleCols(h, h).array());
    Eigen::ArrayXXd gg = gates.middleCols(2 * h, h).array().tanh();
    Eigen::ArrayXXd go = sigmoid(gates.rightCols(h).array());
    cs = (gf * cs.array() + gi * gg).matrix();
    hs = (go * cs.array().tanh()).matrix();
    Eigen::MatrixXd z = hs * p_.w_out.transpose();
    z.rowwise() += p_.b_out.transpose();
    return z;
  };

  Eigen::MatrixXd z;
  z = advance();
  for (TokenId id : prefix) {
    builder.push(id);
    if (builder.done()) throw std::invalid_argument("prefix already complete");
    z = advance();
  }
  std::uint64_t mask = allowed_tokens(builder, omega_);
  SoftmaxRow sm = masked_softmax_row(z.row(0), mask);
  Eigen::VectorXd probs = Eigen::VectorXd::Zero(v);
  for (int j = 0; j < v; ++j) {
    if ((mask >> j) & 1) probs[j] = std::exp(z(0, j) - sm.max_z) / sm.sum;
  }
  return probs;
}

std::vector<Policy::SeqWeight> Policy::weighted_sequences(
    const LossInputs& in) const {
  if (in.batch.empty()) throw std::invalid_argument("empty training batch");
  if (in.batch.size() != in.rewards.size()) {
    throw std::invalid_argument("batch/reward size mismatch");
  }
  const int n = static_cast<int>(in.batch.size());
  std::vector<SeqWeight> seqs;

  switch (in.method) {
    case Trainer::kVpg: {
      for (int i = 0; i < n; ++i) {
        seqs.push_back(SeqWeight{&in.batch[i],
                                 (in.rewards[i] - in.baseline) / n,
                                 in.entropy_weight / n});
      }
      break;
    }
    case Trainer::kRspg: {
      double q = empirical_quantile(in.rewards, 1.0 - in.risk_epsilon);
      int n_top = 0;
      for (double r : in.rewards) {
        if (r > q) ++n_top;
      }
      for (int i = 0; i < n; ++i) {
        double a = in.rewards[i] > q
                       ? (in.rewards[i] - q) / std::max(n_top, 1)
                       : 0.0;
        seqs.push_back(SeqWeight{&in.batch[i], a, in.entropy_weight / n});
      }
      break;
    }
    case Trainer::kPqt: {
      if (in.queue == nullptr || in.queue->size() == 0) {
        throw std::invalid_argument("PQT requires a non-empty queue");
      }
      for (int i = 0; i < n; ++i) {
        seqs.push_back(SeqWeight{&in.batch[i], 0.0, in.entropy_weight / n});
      }
      double k = static_cast<double>(in.queue->size());
      for (const PriorityQueue::Entry& e : in.queue->entries()) {
        seqs.push_back(SeqWeight{&e.t, 1.0 / k, 0.0});
      }
      break;
    }
  }
  return seqs;
}

double Policy::compute_loss(const LossInputs& in) const {
  auto seqs = weighted_sequences(in);
  return replay(seqs, nullptr).loss;
}

namespace {

int params_size(int v, int h, int i) {
  return 4 * h * i + 4 * h * h + 4 * h + v * h + v;
}

}  // namespace

Eigen::VectorXd Policy::parameters() const {
  Eigen::VectorXd flat(params_size(lib_.size(), hidden_, input_dim_));
  int off = 0;
  auto put = [&](const Eigen::MatrixXd& m) {
    std::copy(m.data(), m.data() + m.size(), flat.data() + off);
    off += static_cast<int>(m.size());
  };
  put(p_.w_x);
  put(p_.w_h);
  put(p_.b);
  put(p_.w_out);
  put(p_.b_out);
  return flat;
}

void Policy::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != params_size(lib_.size(), hidden_, input_dim_)) {
    throw std::invalid_argument("parameter vector size mismatch");
  }
  int off = 0;
  auto take = [&](Eigen::MatrixXd& m) {
    std::copy(flat.data() + off, flat.data() + off + m.size(), m.data());
    off += static_cast<int>(m.size());
  };
  auto take_v = [&](Eigen::VectorXd& m) {
    std::copy(flat.data() + off, flat.data() + off + m.size(), m.data());
    off += static_cast<int>(m.size());
  };
  take(p_.w_x);
  take(p_.w_h);
  take_v(p_.b);
  take(p_.w_out);
  take_v(p_.b_out);
}

Eigen::VectorXd Policy::loss_gradient(const LossInputs& in,
                                      double* loss_out) const {
  auto seqs = weighted_sequences(in);
  Params grad;
  ReplayOutcome out = replay(seqs, &grad);
  if (loss_out != nullptr) *loss_out = out.loss;
  Eigen::VectorXd flat(params_size(lib_.size(), hidden_, input_dim_));
  int off = 0;
  auto put = [&](const Eigen::MatrixXd& m) {
    std::copy(m.data(), m.data() + m.size(), flat.data() + off);
    off += static_cast<int>(m.size());
  };
  put(grad.w_x);
  put(grad.w_h);
  put(grad.b);
  put(grad.w_out);
  put(grad.b_out);
  return flat;
}

Policy::TrainOutcome Policy::train_step(const LossInputs& in,
                                        double learning_rate) {
  LossInputs effective = in;
  if (in.method == Trainer::kVpg) {
    double mean = 0.0;
    for (double r : in.rewards) mean += r;
    mean /= static_cast<double>(in.rewards.size());
    ewma_baseline_ = have_baseline_
                         ? in.ewma_alpha * mean +
                               (1.0 - in.ewma_alpha) * ewma_baseline_
                         : mean;
    have_baseline_ = true;
    effective.baseline = ewma_baseline_;
  }

  TrainOutcome outcome;
  outcome.baseline_used = effective.baseline;
  Eigen::VectorXd grad = loss_gradient(effective, &outcome.loss);
  if (!grad.allFinite() || !std::isfinite(outcome.loss)) {
    outcome.applied = false;
    return outcome;
  }

  ++adam_t_;
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double corr1 = 1.0 - std::pow(beta1, static_cast<double>(adam_t_));
  double corr2 = 1.0 - std::pow(beta2, static_cast<double>(adam_t_));
  int off = 0;
  auto apply = [&](Eigen::MatrixXd& theta, Eigen::MatrixXd& m,
                   Eigen::MatrixXd& vv) {
    Eigen::Map<const Eigen::ArrayXd> g(grad.data() + off, theta.size());
    Eigen::Map<Eigen::ArrayXd> ma(m.data(), m.size());
    Eigen::Map<Eigen::ArrayXd> va(vv.data(), vv.size());
    Eigen::Map<Eigen::ArrayXd> th(theta.data(), theta.size());
    ma = beta1 * ma + (1.0 - beta1) * g;
    va = beta2 * va + (1.0 - beta2) * g.square();
    th -= learning_rate * (ma / corr1) / ((va / corr2).sqrt() + eps);
    off += static_cast<int>(theta.size());
  };
  auto apply_v = [&](Eigen::VectorXd& theta, Eigen::VectorXd& m,
                     Eigen::VectorXd& vv) {
    Eigen::Map<const Eigen::ArrayXd> g(grad.data() + off, theta.size());
    Eigen::Map<Eigen::ArrayXd> ma(m.data(), m.size());
    Eigen::Map<Eigen::ArrayXd> va(vv.data(), vv.size());
    Eigen::Map<Eigen::ArrayXd> th(theta.data(), theta.size());
    ma = beta1 * ma + (1.0 - beta1) * g;
    va = beta2 * va + (1.0 - beta2) * g.square();
    th -= learning_rate * (ma / corr1) / ((va / corr2).sqrt() + eps);
    off += static_cast<int>(theta.size());
  };
  apply(p_.w_x, adam_m_.w_x, adam_v_.w_x);
  apply(p_.w_h, adam_m_.w_h, adam_v_.w_h);
  apply_v(p_.b, adam_m_.b, adam_v_.b);
  apply(p_.w_out, adam_m_.w_out, adam_v_.w_out);
  apply_v(p_.b_out, adam_m_.b_out, adam_v_.b_out);
  outcome.applied = true;
  return outcome;
}

}  // namespace symreg
