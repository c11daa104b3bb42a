#include "optensor/causaloid.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace optensor {

int ProbabilityTable::row_index(const std::string& label) const {
  for (size_t i = 0; i < row_labels.size(); ++i)
    if (row_labels[i] == label) return static_cast<int>(i);
  std::ostringstream os;
  os << "no table row labeled " << label;
  throw Error(os.str());
}

FiducialSet minimal_fiducials(const ProbabilityTable& t, double eps_eq) {
  if (t.entries.size() == 0) throw DegenerateTable("empty table");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t.entries);
  const double smax = svd.singularValues()(0);
  if (smax == 0.0) throw DegenerateTable("all-zero table");
  const double thr =
      eps_eq * smax *
      static_cast<double>(std::max(t.entries.rows(), t.entries.cols()));
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thr) ++rank;

  // Columns of entries^T are the table rows; column pivoting picks a
  // maximally independent subset deterministically.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(t.entries.transpose());
  FiducialSet omega;
  const auto perm = qr.colsPermutation().indices();
  for (int i = 0; i < rank; ++i) omega.rows.push_back(perm(i));
  std::sort(omega.rows.begin(), omega.rows.end());
  return omega;
}

Decomposition decompose(const ProbabilityTable& t, const FiducialSet& omega,
                        double eps_eq) {
  const long rows = t.entries.rows(), cols = t.entries.cols();
  const int rank = static_cast<int>(omega.rows.size());
  if (rank == 0) throw BadFiducials("empty fiducial set");
  Eigen::MatrixXd p(rank, cols);
  for (int k = 0; k < rank; ++k) {
    if (omega.rows[k] < 0 || omega.rows[k] >= rows)
      throw BadFiducials("fiducial row index out of range");
    p.row(k) = t.entries.row(omega.rows[k]);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(p.transpose());
  if (qr.rank() < rank)
    throw BadFiducials("fiducial rows are linearly dependent");

  Eigen::MatrixXd r(rows, rank);
  for (long i = 0; i < rows; ++i) {
    const auto it = std::find(omega.rows.begin(), omega.rows.end(), i);
    if (it != omega.rows.end()) {
      r.row(i).setZero();
      r(i, it - omega.rows.begin()) = 1.0;
    } else {
      r.row(i) = qr.solve(t.entries.row(i).transpose()).transpose();
    }
  }
  const double err = (r * p - t.entries).cwiseAbs().maxCoeff();
  if (err > eps_eq * static_cast<double>(rows) * static_cast<double>(cols))
    throw BadFiducials("fiducial set does not span the table rows");
  return {std::move(r), std::move(p)};
}

HeraldReport herald(const Eigen::VectorXd& r, const Eigen::VectorXd& r2,
                    double tol) {
  if (r.size() != r2.size()) throw Error("herald vectors differ in length");
  const double n2 = r2.squaredNorm();
  if (n2 == 0.0) throw ZeroEffect("reference effect vector is zero");
  HeraldReport rep;
  rep.k = r.dot(r2) / n2;
  const double nr = r.norm();
  rep.residual = nr == 0.0 ? 0.0 : (r - rep.k * r2).norm() / nr;
  rep.heralded = rep.residual <= tol;
  return rep;
}

std::pair<double, double> herald_bounds(
    const Eigen::VectorXd& r, const Eigen::VectorXd& r2,
    const std::vector<Eigen::VectorXd>& admissible) {
  if (admissible.empty())
    throw UnboundedRatio("no admissible states given");
  std::optional<std::pair<double, double>> range;
  for (const auto& p : admissible) {
    const double denom = r2.dot(p);
    if (denom == 0.0) throw UnboundedRatio("effect vanishes on a state");
    const double ratio = r.dot(p) / denom;
    if (!range) {
      range = {ratio, ratio};
    } else {
      range->first = std::min(range->first, ratio);
      range->second = std::max(range->second, ratio);
    }
  }
  return *range;
}

namespace {

std::vector<long> strides_of(const std::vector<int>& dims) {
  std::vector<long> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * dims[i + 1];
  return s;
}

long total_dim(const std::vector<int>& dims) {
  long d = 1;
  for (int x : dims) d *= x;
  return d;
}

// Flat offsets contributed by the factors at `pos` as their joint index runs.
std::vector<long> offsets(const std::vector<int>& dims,
                          const std::vector<int>& pos) {
  const auto strides = strides_of(dims);
  std::vector<int> sub;
  for (int p : pos) sub.push_back(dims[p]);
  const long count = total_dim(sub);
  std::vector<long> off(count, 0);
  for (long f = 0; f < count; ++f) {
    long rem = f;
    for (int i = static_cast<int>(pos.size()) - 1; i >= 0; --i) {
      off[f] += (rem % sub[i]) * strides[pos[i]];
      rem /= sub[i];
    }
  }
  return off;
}

std::vector<int> all_but(size_t n, std::initializer_list<int> skip) {
  std::vector<int> r;
  for (size_t i = 0; i < n; ++i)
    if (std::find(skip.begin(), skip.end(), static_cast<int>(i)) == skip.end())
      r.push_back(static_cast<int>(i));
  return r;
}

int position_of(const DuoNode& n, int wire_id) {
  for (size_t i = 0; i < n.wire_ids.size(); ++i)
    if (n.wire_ids[i] == wire_id) return static_cast<int>(i);
  std::ostringstream os;
  os << "duotensor node has no wire " << wire_id;
  throw HookupMismatch(os.str());
}

DuoNode keep_factors(const DuoNode& n, const std::vector<int>& pos,
                     const std::vector<double>& data) {
  DuoNode out;
  for (int p : pos) {
    out.wire_ids.push_back(n.wire_ids[p]);
    out.dims.push_back(n.dims[p]);
  }
  out.data = Eigen::Map<const Eigen::VectorXd>(data.data(), data.size());
  return out;
}

DuoNode contract_link(const DuoNode& a, int pa, const DuoNode& b, int pb,
                      const Eigen::MatrixXd& h) {
  const int ds = a.dims[pa];
  if (h.rows() != ds || h.cols() != b.dims[pb])
    throw HookupMismatch("hookup matrix does not match the linked dimensions");
  const auto fa = all_but(a.dims.size(), {pa});
  const auto fb = all_but(b.dims.size(), {pb});
  const auto fa_off = offsets(a.dims, fa);
  const auto fb_off = offsets(b.dims, fb);
  const auto sa_off = offsets(a.dims, {pa});
  const auto tb_off = offsets(b.dims, {pb});

  std::vector<double> data(fa_off.size() * fb_off.size(), 0.0);
  for (size_t ia = 0; ia < fa_off.size(); ++ia)
    for (size_t ib = 0; ib < fb_off.size(); ++ib) {
      double sum = 0;
      for (int s = 0; s < ds; ++s)
        for (int t = 0; t < b.dims[pb]; ++t)
          sum += a.data(fa_off[ia] + sa_off[s]) * h(s, t) *
                 b.data(fb_off[ib] + tb_off[t]);
      data[ia * fb_off.size() + ib] = sum;
    }

  DuoNode merged = keep_factors(a, fa, data);
  DuoNode tail = keep_factors(b, fb, {});
  merged.wire_ids.insert(merged.wire_ids.end(), tail.wire_ids.begin(),
                         tail.wire_ids.end());
  merged.dims.insert(merged.dims.end(), tail.dims.begin(), tail.dims.end());
  return merged;
}

DuoNode contract_self(const DuoNode& a, int pa, int pb,
                      const Eigen::MatrixXd& h) {
  if (h.rows() != a.dims[pa] || h.cols() != a.dims[pb])
    throw HookupMismatch("hookup matrix does not match the linked dimensions");
  const auto free = all_but(a.dims.size(), {pa, pb});
  const auto free_off = offsets(a.dims, free);
  const auto s_off = offsets(a.dims, {pa});
  const auto t_off = offsets(a.dims, {pb});

  std::vector<double> data(free_off.size(), 0.0);
  for (size_t i = 0; i < free_off.size(); ++i) {
    double sum = 0;
    for (int s = 0; s < a.dims[pa]; ++s)
      for (int t = 0; t < a.dims[pb]; ++t)
        sum += h(s, t) * a.data(free_off[i] + s_off[s] + t_off[t]);
    data[i] = sum;
  }
  return keep_factors(a, free, data);
}

DuoNode outer(const DuoNode& a, const DuoNode& b) {
  DuoNode out;
  out.wire_ids = a.wire_ids;
  out.wire_ids.insert(out.wire_ids.end(), b.wire_ids.begin(),
                      b.wire_ids.end());
  out.dims = a.dims;
  out.dims.insert(out.dims.end(), b.dims.begin(), b.dims.end());
  out.data.resize(a.data.size() * b.data.size());
  for (long i = 0; i < a.data.size(); ++i)
    out.data.segment(i * b.data.size(), b.data.size()) = a.data(i) * b.data;
  return out;
}

}  // namespace

DuoNode duotensor_contract(std::vector<DuoNode> nodes,
                           const std::vector<DuoLink>& links) {
  if (nodes.empty()) throw HookupMismatch("no nodes to contract");
  std::vector<std::optional<DuoNode>> parts(nodes.begin(), nodes.end());
  std::vector<int> owner(nodes.size());
  for (size_t i = 0; i < owner.size(); ++i) owner[i] = static_cast<int>(i);

  for (const auto& l : links) {
    const int pa = owner.at(l.node_a);
    const int pb = owner.at(l.node_b);
    if (pa == pb) {
      auto& part = *parts[pa];
      part = contract_self(part, position_of(part, l.wire_a),
                           position_of(part, l.wire_b), l.hookup);
      continue;
    }
    parts[pa] = contract_link(*parts[pa], position_of(*parts[pa], l.wire_a),
                              *parts[pb], position_of(*parts[pb], l.wire_b),
                              l.hookup);
    parts[pb].reset();
    for (auto& o : owner)
      if (o == pb) o = pa;
  }

  std::optional<DuoNode> result;
  for (auto& part : parts) {
    if (!part) continue;
    result = result ? outer(*result, *part) : *part;
  }
  return *result;
}

}  // namespace optensor
