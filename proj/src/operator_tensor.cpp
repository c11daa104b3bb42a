#include "optensor/operator_tensor.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace optensor {
namespace {

std::vector<int> factor_dims(const std::vector<WireInstance>& factors) {
  std::vector<int> dims;
  dims.reserve(factors.size());
  for (const auto& f : factors) dims.push_back(f.type.dim);
  return dims;
}

long total_dim(const std::vector<int>& dims) {
  long d = 1;
  for (int x : dims) d *= x;
  return d;
}

// Row-major strides: factor 0 varies slowest.
std::vector<long> strides_of(const std::vector<int>& dims) {
  std::vector<long> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * dims[i + 1];
  return s;
}

void unflatten(long flat, const std::vector<int>& dims, std::vector<int>& out) {
  out.resize(dims.size());
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    out[i] = static_cast<int>(flat % dims[i]);
    flat /= dims[i];
  }
}

void check_unique_ids(const std::vector<WireInstance>& factors) {
  std::unordered_set<int> seen;
  for (const auto& f : factors) {
    if (!seen.insert(f.id).second) {
      std::ostringstream msg;
      msg << "wire id " << f.id << " appears twice in one tensor";
      throw DuplicateWire(msg.str());
    }
  }
}

}  // namespace

OperatorTensor::OperatorTensor(std::vector<WireInstance> factors, Matrix matrix,
                               double eps_herm)
    : factors_(std::move(factors)), matrix_(std::move(matrix)) {
  check_unique_ids(factors_);
  const long d = total_dim(factor_dims(factors_));
  if (matrix_.rows() != d || matrix_.cols() != d) {
    std::ostringstream msg;
    msg << "matrix is " << matrix_.rows() << "x" << matrix_.cols()
        << " but wire dimensions require " << d << "x" << d;
    throw Error(msg.str());
  }
  const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
  const double dev = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > eps_herm * scale) {
    std::ostringstream msg;
    msg << "matrix deviates from Hermitian by " << dev;
    throw NotHermitian(msg.str());
  }
}

std::vector<WireInstance> OperatorTensor::inputs() const {
  std::vector<WireInstance> r;
  for (const auto& f : factors_)
    if (f.orientation == Orientation::input) r.push_back(f);
  return r;
}

std::vector<WireInstance> OperatorTensor::outputs() const {
  std::vector<WireInstance> r;
  for (const auto& f : factors_)
    if (f.orientation == Orientation::output) r.push_back(f);
  return r;
}

bool OperatorTensor::has_wire(int id) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [id](const WireInstance& f) { return f.id == id; });
}

int OperatorTensor::factor_of(int id) const {
  for (size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].id == id) return static_cast<int>(i);
  std::ostringstream msg;
  msg << "no wire with id " << id;
  throw UnknownWire(msg.str());
}

OperatorTensor OperatorTensor::permuted(const std::vector<int>& order) const {
  if (order.size() != factors_.size())
    throw Error("permutation size mismatch");
  std::vector<WireInstance> new_factors;
  new_factors.reserve(order.size());
  for (int p : order) new_factors.push_back(factors_.at(p));

  const auto dims = factor_dims(factors_);
  const auto strides = strides_of(dims);
  const auto new_dims = factor_dims(new_factors);
  const auto new_strides = strides_of(new_dims);
  const long d = matrix_.rows();

  // new flat index -> old flat index
  std::vector<long> remap(d);
  std::vector<int> digits;
  for (long f = 0; f < d; ++f) {
    unflatten(f, new_dims, digits);
    long old = 0;
    for (size_t k = 0; k < order.size(); ++k) old += digits[k] * strides[order[k]];
    remap[f] = old;
  }
  Matrix m(d, d);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) m(r, c) = matrix_(remap[r], remap[c]);
  (void)new_strides;
  return OperatorTensor(std::move(new_factors), std::move(m));
}

OperatorTensor OperatorTensor::canonical() const {
  std::vector<int> order(factors_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [this](int a, int b) {
    const auto& fa = factors_[a];
    const auto& fb = factors_[b];
    if (fa.orientation != fb.orientation)
      return fa.orientation == Orientation::output;
    return fa.id < fb.id;
  });
  return permuted(order);
}

OperatorTensor OperatorTensor::identity(std::vector<WireInstance> wires) {
  const long d = total_dim(factor_dims(wires));
  return OperatorTensor(std::move(wires), Matrix::Identity(d, d));
}

OperatorTensor OperatorTensor::scalar(Complex value, double eps_herm) {
  Matrix m(1, 1);
  m(0, 0) = value;
  return OperatorTensor({}, std::move(m), eps_herm);
}

OperatorTensor tensor_product(const OperatorTensor& a, const OperatorTensor& b) {
  for (const auto& f : b.factors())
    if (a.has_wire(f.id)) {
      std::ostringstream msg;
      msg << "wire id " << f.id << " present in both operands";
      throw DuplicateWire(msg.str());
    }
  std::vector<WireInstance> factors = a.factors();
  factors.insert(factors.end(), b.factors().begin(), b.factors().end());

  const long da = a.dim(), db = b.dim();
  Matrix m(da * db, da * db);
  for (long ra = 0; ra < da; ++ra)
    for (long ca = 0; ca < da; ++ca)
      m.block(ra * db, ca * db, db, db) = a.matrix()(ra, ca) * b.matrix();
  return OperatorTensor(std::move(factors), std::move(m));
}

OperatorTensor partial_trace(const OperatorTensor& a, const std::set<int>& wire_ids) {
  std::vector<int> traced, kept;
  for (int id : wire_ids) traced.push_back(a.factor_of(id));
  std::sort(traced.begin(), traced.end());
  for (size_t i = 0; i < a.factors().size(); ++i)
    if (!std::binary_search(traced.begin(), traced.end(), static_cast<int>(i)))
      kept.push_back(static_cast<int>(i));

  const auto dims = factor_dims(a.factors());
  const auto strides = strides_of(dims);

  std::vector<WireInstance> kept_factors;
  std::vector<int> kept_dims;
  for (int p : kept) {
    kept_factors.push_back(a.factors()[p]);
    kept_dims.push_back(dims[p]);
  }
  std::vector<int> traced_dims;
  for (int p : traced) traced_dims.push_back(dims[p]);

  const long dk = total_dim(kept_dims);
  const long dt = total_dim(traced_dims);

  // Flat offsets of kept / traced sub-indices inside a full index.
  std::vector<long> kept_offset(dk), traced_offset(dt);
  std::vector<int> digits;
  for (long f = 0; f < dk; ++f) {
    unflatten(f, kept_dims, digits);
    long off = 0;
    for (size_t k = 0; k < kept.size(); ++k) off += digits[k] * strides[kept[k]];
    kept_offset[f] = off;
  }
  for (long f = 0; f < dt; ++f) {
    unflatten(f, traced_dims, digits);
    long off = 0;
    for (size_t k = 0; k < traced.size(); ++k) off += digits[k] * strides[traced[k]];
    traced_offset[f] = off;
  }

  Matrix m = Matrix::Zero(dk, dk);
  for (long r = 0; r < dk; ++r)
    for (long c = 0; c < dk; ++c) {
      Complex sum = 0;
      for (long t = 0; t < dt; ++t)
        sum += a.matrix()(kept_offset[r] + traced_offset[t],
                          kept_offset[c] + traced_offset[t]);
      m(r, c) = sum;
    }
  return OperatorTensor(std::move(kept_factors), std::move(m));
}

OperatorTensor partial_transpose(const OperatorTensor& a, const std::set<int>& wire_ids) {
  std::vector<bool> flip(a.factors().size(), false);
  for (int id : wire_ids) flip[a.factor_of(id)] = true;

  const auto dims = factor_dims(a.factors());
  const auto strides = strides_of(dims);
  const long d = a.dim();

  Matrix m(d, d);
  std::vector<int> rdig, cdig;
  for (long r = 0; r < d; ++r) {
    unflatten(r, dims, rdig);
    for (long c = 0; c < d; ++c) {
      unflatten(c, dims, cdig);
      long rr = 0, cc = 0;
      for (size_t k = 0; k < dims.size(); ++k) {
        const int rk = flip[k] ? cdig[k] : rdig[k];
        const int ck = flip[k] ? rdig[k] : cdig[k];
        rr += rk * strides[k];
        cc += ck * strides[k];
      }
      m(rr, cc) = a.matrix()(r, c);
    }
  }
  return OperatorTensor(a.factors(), std::move(m));
}

Eigen::VectorXd eigenvalues(const OperatorTensor& a, double eps_herm) {
  const double scale = std::max(1.0, a.matrix().cwiseAbs().maxCoeff());
  const double dev = (a.matrix() - a.matrix().adjoint()).cwiseAbs().maxCoeff();
  if (dev > eps_herm * scale) {
    std::ostringstream msg;
    msg << "operator deviates from Hermitian by " << dev;
    throw NotHermitian(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      (a.matrix() + a.matrix().adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double trace_norm(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver((m + m.adjoint()) / 2.0,
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

double trace_norm(const OperatorTensor& a) { return trace_norm(a.matrix()); }

std::complex<double> trace(const OperatorTensor& a) { return a.matrix().trace(); }

bool is_psd(const OperatorTensor& a, const Tolerances& tol) {
  const Eigen::VectorXd ev = eigenvalues(a, tol.eps_herm);
  const double tn = ev.cwiseAbs().sum();
  const double d = static_cast<double>(a.dim());
  return ev.minCoeff() >= -tol.eps_psd * d * std::max(1.0, tn / d);
}

double as_scalar(const OperatorTensor& a, double eps_eq) {
  if (!a.factors().empty()) throw Error("tensor has open wires, not a scalar");
  const Complex v = a.matrix()(0, 0);
  if (std::abs(v.imag()) > eps_eq * std::max(1.0, std::abs(v.real()))) {
    std::ostringstream msg;
    msg << "scalar has imaginary part " << v.imag();
    throw NonRealScalar(msg.str());
  }
  return v.real();
}

OperatorTensor contract_pair(const OperatorTensor& a, const OperatorTensor& b,
                             const std::vector<std::pair<int, int>>& id_pairs) {
  std::vector<int> la, lb;
  for (const auto& [ia, ib] : id_pairs) {
    const int pa = a.factor_of(ia);
    const int pb = b.factor_of(ib);
    const auto& wa = a.factors()[pa];
    const auto& wb = b.factors()[pb];
    if (wa.type != wb.type) throw InvalidWiring("linked wires have different types");
    if (wa.orientation == wb.orientation)
      throw InvalidWiring("linked wires have the same orientation");
    la.push_back(pa);
    lb.push_back(pb);
  }

  auto free_positions = [](const OperatorTensor& t, const std::vector<int>& linked) {
    std::vector<int> fp;
    for (size_t i = 0; i < t.factors().size(); ++i)
      if (std::find(linked.begin(), linked.end(), static_cast<int>(i)) == linked.end())
        fp.push_back(static_cast<int>(i));
    return fp;
  };
  const std::vector<int> fa = free_positions(a, la);
  const std::vector<int> fb = free_positions(b, lb);

  const auto adims = factor_dims(a.factors());
  const auto bdims = factor_dims(b.factors());
  const auto astr = strides_of(adims);
  const auto bstr = strides_of(bdims);

  auto sub_dims = [](const std::vector<int>& dims, const std::vector<int>& pos) {
    std::vector<int> r;
    for (int p : pos) r.push_back(dims[p]);
    return r;
  };
  const auto fa_dims = sub_dims(adims, fa);
  const auto fb_dims = sub_dims(bdims, fb);
  const auto l_dims = sub_dims(adims, la);  // equal to sub_dims(bdims, lb)

  const long dfa = total_dim(fa_dims);
  const long dfb = total_dim(fb_dims);
  const long dl = total_dim(l_dims);

  auto offsets = [](long count, const std::vector<int>& dims,
                    const std::vector<int>& pos, const std::vector<long>& strides) {
    std::vector<long> off(count);
    std::vector<int> digits;
    for (long f = 0; f < count; ++f) {
      unflatten(f, dims, digits);
      long o = 0;
      for (size_t k = 0; k < pos.size(); ++k) o += digits[k] * strides[pos[k]];
      off[f] = o;
    }
    return off;
  };
  const auto fa_off = offsets(dfa, fa_dims, fa, astr);
  const auto fb_off = offsets(dfb, fb_dims, fb, bstr);
  const auto la_off = offsets(dl, l_dims, la, astr);
  const auto lb_off = offsets(dl, l_dims, lb, bstr);

  // Reshape:  A'((ra,ca),(s,t)) = A(ra+s, ca+t);  B'((s,t),(rb,cb)) = B(rb+t, cb+s).
  // Then R = A' B' and result((ra,rb),(ca,cb)) = R((ra,ca),(rb,cb)): the ket
  // index s of A pairs with the bra index of B and vice versa.
  Matrix ap(dfa * dfa, dl * dl), bp(dl * dl, dfb * dfb);
  for (long ra = 0; ra < dfa; ++ra)
    for (long ca = 0; ca < dfa; ++ca)
      for (long s = 0; s < dl; ++s)
        for (long t = 0; t < dl; ++t)
          ap(ra * dfa + ca, s * dl + t) =
              a.matrix()(fa_off[ra] + la_off[s], fa_off[ca] + la_off[t]);
  for (long s = 0; s < dl; ++s)
    for (long t = 0; t < dl; ++t)
      for (long rb = 0; rb < dfb; ++rb)
        for (long cb = 0; cb < dfb; ++cb)
          bp(s * dl + t, rb * dfb + cb) =
              b.matrix()(fb_off[rb] + lb_off[t], fb_off[cb] + lb_off[s]);
  const Matrix r = ap * bp;

  std::vector<WireInstance> factors;
  for (int p : fa) factors.push_back(a.factors()[p]);
  for (int p : fb) factors.push_back(b.factors()[p]);

  Matrix m(dfa * dfb, dfa * dfb);
  for (long ra = 0; ra < dfa; ++ra)
    for (long rb = 0; rb < dfb; ++rb)
      for (long ca = 0; ca < dfa; ++ca)
        for (long cb = 0; cb < dfb; ++cb)
          m(ra * dfb + rb, ca * dfb + cb) = r(ra * dfa + ca, rb * dfb + cb);
  return OperatorTensor(std::move(factors), std::move(m));
}

OperatorTensor contract_pair(const OperatorTensor& a, const OperatorTensor& b,
                             const std::vector<int>& wire_ids) {
  std::vector<std::pair<int, int>> pairs;
  for (int id : wire_ids) pairs.emplace_back(id, id);
  return contract_pair(a, b, pairs);
}

OperatorTensor self_contract(const OperatorTensor& a, int out_id, int in_id) {
  const int p = a.factor_of(out_id);
  const int q = a.factor_of(in_id);
  const auto& wp = a.factors()[p];
  const auto& wq = a.factors()[q];
  if (wp.orientation != Orientation::output || wq.orientation != Orientation::input)
    throw InvalidWiring("self-contraction needs an (output, input) pair");
  if (wp.type != wq.type) throw InvalidWiring("linked wires have different types");

  const auto dims = factor_dims(a.factors());
  const auto strides = strides_of(dims);
  const int ld = dims[p];

  std::vector<int> free;
  for (size_t i = 0; i < dims.size(); ++i)
    if (static_cast<int>(i) != p && static_cast<int>(i) != q)
      free.push_back(static_cast<int>(i));
  std::vector<int> free_dims;
  for (int f : free) free_dims.push_back(dims[f]);
  const long df = total_dim(free_dims);

  std::vector<long> free_off(df);
  std::vector<int> digits;
  for (long f = 0; f < df; ++f) {
    unflatten(f, free_dims, digits);
    long o = 0;
    for (size_t k = 0; k < free.size(); ++k) o += digits[k] * strides[free[k]];
    free_off[f] = o;
  }

  Matrix m = Matrix::Zero(df, df);
  for (long r = 0; r < df; ++r)
    for (long c = 0; c < df; ++c) {
      Complex sum = 0;
      for (int s = 0; s < ld; ++s)
        for (int t = 0; t < ld; ++t)
          sum += a.matrix()(free_off[r] + s * strides[p] + t * strides[q],
                            free_off[c] + t * strides[p] + s * strides[q]);
      m(r, c) = sum;
    }

  std::vector<WireInstance> factors;
  for (int f : free) factors.push_back(a.factors()[f]);
  return OperatorTensor(std::move(factors), std::move(m));
}

}  // namespace optensor
