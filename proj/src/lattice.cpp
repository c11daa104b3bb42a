#include "optensor/lattice.hpp"

#include "optensor/fragment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace optensor {
namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::set<int> ids_of(const std::vector<WireInstance>& ws) {
  std::set<int> ids;
  for (const auto& w : ws) ids.insert(w.id);
  return ids;
}

}  // namespace

Matrix gate_vertex(const Matrix& unitary) {
  const WireType q{"q", 2};
  return from_channel({unitary},
                      {{q, 3, Orientation::input}, {q, 4, Orientation::input}},
                      {{q, 1, Orientation::output}, {q, 2, Orientation::output}})
      .matrix();
}

Matrix LatticeSpec::vertex_op(int r, int c) const {
  const auto it = vertex_ops.find(r * width + c);
  if (it != vertex_ops.end()) return it->second;
  static const Matrix identity_vertex = gate_vertex(Matrix::Identity(4, 4));
  return identity_vertex;
}

RegionOperator build_region_operator(
    const LatticeSpec& lat, const std::vector<std::pair<int, int>>& region,
    double L, const Tolerances& tol) {
  if (region.empty()) throw BadRegion("region has no vertices");
  std::set<std::pair<int, int>> seen;
  for (auto [r, c] : region) {
    if (r < 0 || r >= lat.height || c < 0 || c >= lat.width)
      throw BadRegion("region vertex outside the lattice");
    if (!seen.insert({r, c}).second)
      throw BadRegion("region lists a vertex twice");
  }

  // A wire is keyed by the port it feeds: (row, column, side) of the
  // consuming vertex, sides 0 = left input, 1 = right input.
  const auto wire_id = [&](int r, int c, int side) {
    return ((r * (lat.width + 3) + (c + 2)) * 2 + side) + 1;
  };
  const double dt = L / lat.height;
  const WireType q{"q", 2};

  std::vector<OperatorTensor> nodes;
  std::map<int, double> times;
  for (auto [r, c] : seen) {
    const int out_l = wire_id(r + 1, c - 1, 1);
    const int out_r = wire_id(r + 1, c + 1, 0);
    const int in_l = wire_id(r, c, 0);
    const int in_r = wire_id(r, c, 1);
    nodes.emplace_back(
        std::vector<WireInstance>{{q, out_l, Orientation::output},
                                  {q, out_r, Orientation::output},
                                  {q, in_l, Orientation::input},
                                  {q, in_r, Orientation::input}},
        lat.vertex_op(r, c), tol.eps_herm);
    times[out_l] = times[out_r] = (r + 1) * dt;
    times[in_l] = times[in_r] = r * dt;
  }

  RegionOperator out{
      contract({nodes, auto_links(nodes)}, tol).canonical(), {}, {}};
  for (const auto& w : out.op.factors()) {
    out.wire_time[w.id] = times.at(w.id);
    (w.orientation == Orientation::output ? out.surface.plus_ids
                                          : out.surface.minus_ids)
        .push_back(w.id);
  }
  std::sort(out.surface.plus_ids.begin(), out.surface.plus_ids.end());
  std::sort(out.surface.minus_ids.begin(), out.surface.minus_ids.end());
  return out;
}

namespace {

// Positions of the basis states of a qubit group ordered by Hamming weight,
// then lexicographically: rank[state] < K means the state survives.
std::vector<long> hamming_lex_rank(long dim) {
  std::vector<long> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [](long a, long b) {
    const int wa = __builtin_popcountll(a), wb = __builtin_popcountll(b);
    return wa != wb ? wa < wb : a < b;
  });
  std::vector<long> rank(dim);
  for (long i = 0; i < dim; ++i) rank[order[i]] = i;
  return rank;
}

// Reorders `t` so its factor ids appear in the order given by `target`.
OperatorTensor reorder_to(const OperatorTensor& t,
                          const std::vector<WireInstance>& target) {
  std::vector<int> order;
  for (const auto& w : target) order.push_back(t.factor_of(w.id));
  return t.permuted(order);
}

// Survival mask over the full index space: a basis state survives when both
// its output-group rank and input-group rank fall below k.
std::vector<char> survival_mask(const OperatorTensor& t, long long k) {
  std::vector<int> out_pos, in_pos;
  for (size_t i = 0; i < t.factors().size(); ++i)
    (t.factors()[i].orientation == Orientation::output ? out_pos : in_pos)
        .push_back(static_cast<int>(i));
  std::vector<int> dims;
  for (const auto& w : t.factors()) dims.push_back(w.type.dim);

  auto group_index = [&](long flat, const std::vector<int>& pos) {
    std::vector<int> digits(dims.size());
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
      digits[i] = static_cast<int>(flat % dims[i]);
      flat /= dims[i];
    }
    long g = 0;
    for (int p : pos) g = g * dims[p] + digits[p];
    return g;
  };

  long dout = 1, din = 1;
  for (int p : out_pos) dout *= dims[p];
  for (int p : in_pos) din *= dims[p];
  const auto rank_out = hamming_lex_rank(dout);
  const auto rank_in = hamming_lex_rank(din);
  const long keep_out = static_cast<long>(std::min<long long>(k, dout));
  const long keep_in = static_cast<long>(std::min<long long>(k, din));

  std::vector<char> mask(t.dim(), 0);
  for (long f = 0; f < t.dim(); ++f)
    mask[f] = rank_out[group_index(f, out_pos)] < keep_out &&
              rank_in[group_index(f, in_pos)] < keep_in;
  return mask;
}

double negative_sum(const Eigen::VectorXd& ev, double clip) {
  double s = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) < -clip) s += ev(i);
  return s;
}

}  // namespace

std::vector<StepRecord> check_deterministic_recursion(const RegionOperator& a,
                                                      const Foliation& fol,
                                                      int D,
                                                      const Tolerances& tol) {
  const int N = static_cast<int>(fol.cuts.size());
  if (N == 0) throw NoFoliation("foliation has no cuts");
  if (N + 2 > 62) throw TruncationOverflow("truncation schedule overflows");

  OperatorTensor x = a.op;
  std::vector<StepRecord> records;
  records.reserve(N);

  for (int n = 1; n <= N; ++n) {
    const Cut& cut = fol.cuts[N - n];
    StepRecord rec;
    rec.n = n;
    rec.k_n = static_cast<long long>(D) << (N - n + 1);

    std::set<int> d_plus, d_minus;
    for (const auto& w : x.factors())
      if (a.wire_time.at(w.id) >= cut.time)
        (w.orientation == Orientation::output ? d_plus : d_minus).insert(w.id);

    OperatorTensor y = d_plus.empty() ? x : partial_trace(x, d_plus);

    OperatorTensor an = y;
    if (!d_minus.empty()) {
      std::vector<WireInstance> minus_wires;
      for (const auto& w : y.factors())
        if (d_minus.count(w.id)) minus_wires.push_back(w);
      long dim_minus = 1;
      for (const auto& w : minus_wires) dim_minus *= w.type.dim;
      const OperatorTensor traced = partial_trace(y, d_minus);
      an = OperatorTensor(traced.factors(),
                          traced.matrix() / static_cast<double>(dim_minus));
      const OperatorTensor expected = reorder_to(
          tensor_product(OperatorTensor::identity(minus_wires), an),
          y.factors());
      rec.beta = trace_norm(y.matrix() - expected.matrix());
    }

    const auto mask = survival_mask(an, rec.k_n);
    const bool truncates =
        std::any_of(mask.begin(), mask.end(), [](char c) { return !c; });
    OperatorTensor truncated = an;
    if (truncates) {
      Matrix t = an.matrix();
      for (long r = 0; r < t.rows(); ++r)
        for (long c = 0; c < t.cols(); ++c)
          if (!mask[r] || !mask[c]) t(r, c) = 0;
      rec.alpha = trace_norm(an.matrix() - t);
      truncated = OperatorTensor(an.factors(), std::move(t));
    }

    const bool noop = d_plus.empty() && d_minus.empty() && !truncates;
    if (noop && !records.empty()) {
      rec.min_eig = records.back().min_eig;
      rec.neg = records.back().neg;
    } else {
      const Eigen::VectorXd ev = eigenvalues(
          partial_transpose(truncated, ids_of(truncated.inputs())),
          tol.eps_herm);
      rec.min_eig = ev.minCoeff();
      const double d = static_cast<double>(truncated.dim());
      rec.neg = negative_sum(
          ev, tol.eps_psd * d * std::max(1.0, ev.cwiseAbs().sum() / d));
    }

    records.push_back(rec);
    // The truncation error is reported through alpha; the exact operator is
    // carried forward so that beta and the negativity stay well defined.
    x = std::move(an);
  }

  // Initial-surface identity condition.
  records.back().beta +=
      trace_norm(x.matrix() - Matrix::Identity(x.dim(), x.dim()));
  return records;
}

namespace {

double least_squares_slope(const std::vector<double>& y) {
  const int n = static_cast<int>(y.size());
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = i + 1;
    sx += x;
    sy += y[i];
    sxx += x * x;
    sxy += x * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("OPTENSOR_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

WitnessReport witness_sweep(const RegionOperator& a,
                            const SpacetimeBackground& bg,
                            const SweepOptions& opt, const Tolerances& tol) {
  if (opt.m_max < 2) throw Error("witness sweep needs m_max >= 2");
  std::optional<double> min_output_time;
  for (int id : a.surface.plus_ids) {
    const double t = a.wire_time.at(id);
    if (!min_output_time || t < *min_output_time) min_output_time = t;
  }

  WitnessReport report;
  const Rect rect{0.0, opt.L, 0.0, opt.L};
  const int threads = worker_count(opt.threads);

  for (int m = 1; m <= opt.m_max; ++m) {
    const double l = opt.L / m;
    CausalSet cs;
    if (opt.grid) {
      cs = sprinkle(bg, rect, l, mix(opt.seed, m), true);
    } else {
      bool done = false;
      for (int attempt = 0; attempt < 16 && !done; ++attempt) {
        try {
          cs = sprinkle(bg, rect, l, mix(mix(opt.seed, m), attempt), false);
          done = true;
        } catch (const TooSparse&) {
          if (attempt == 15) throw;
        }
      }
    }

    FoliationOptions fopt;
    fopt.max_foliations = opt.max_foliations;
    fopt.seed = mix(mix(opt.seed, m), 0xf01);
    fopt.min_output_time = min_output_time;
    const auto foliations = generate_foliations(cs, fopt);

    std::vector<std::vector<StepRecord>> diag(foliations.size());
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto work = [&]() {
      for (size_t f = next.fetch_add(1); f < foliations.size();
           f = next.fetch_add(1)) {
        try {
          diag[f] = check_deterministic_recursion(a, foliations[f], opt.D, tol);
        } catch (...) {
          std::lock_guard<std::mutex> g(failure_lock);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::min(threads, static_cast<int>(foliations.size()));
         ++t)
      pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    double a_sum = 0, w_sum = 0;
    for (const auto& steps : diag)
      for (const auto& rec : steps) {
        a_sum += rec.alpha / static_cast<double>(rec.k_n);
        w_sum += (std::abs(rec.neg) + rec.beta) / static_cast<double>(rec.k_n);
      }
    const double F = static_cast<double>(foliations.size());
    report.rows.push_back(
        {m, l, static_cast<int>(foliations.size()), a_sum / F, w_sum / F});
    report.diagnostics.push_back(std::move(diag));
  }

  std::vector<double> w, al;
  for (const auto& row : report.rows) {
    w.push_back(row.W_l);
    al.push_back(row.A_l);
  }
  report.slope = least_squares_slope(w);
  const double w_max = *std::max_element(w.begin(), w.end());
  const double a_max = *std::max_element(al.begin(), al.end());
  report.physical = w.back() < opt.eps_witness &&
                    (report.slope < 0.0 || w_max <= opt.eps_witness);
  report.approximation_ok =
      al.back() < opt.eps_witness &&
      (least_squares_slope(al) < 0.0 || a_max <= opt.eps_witness);
  return report;
}

bool check_general_operator(const OperatorTensor& a, const OperatorTensor& det,
                            const Tolerances& tol) {
  if (a.canonical().factors() != det.canonical().factors())
    throw SignatureMismatch("operator and completion differ in wire signature");
  if (!check_physical(det, tol).ok())
    throw BadCompletion("completion fails the physicality conditions");
  const Matrix reduced =
      partial_trace(det.canonical(), ids_of(det.outputs())).matrix();
  if ((reduced - Matrix::Identity(reduced.rows(), reduced.cols()))
          .cwiseAbs()
          .maxCoeff() > tol.eps_eq)
    throw BadCompletion("completion is not deterministic");

  const OperatorTensor ac = a.canonical();
  const OperatorTensor b(ac.factors(),
                         det.canonical().matrix() - ac.matrix(), tol.eps_herm);
  return is_psd(partial_transpose(ac, ids_of(ac.inputs())), tol) &&
         is_psd(partial_transpose(b, ids_of(b.inputs())), tol);
}

}  // namespace optensor
