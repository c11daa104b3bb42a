#include "optensor/fragment.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "optensor/physicality.hpp"

namespace optensor {
namespace {

std::string join(const std::vector<std::string>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << "; ";
    os << v[i];
  }
  return os.str();
}

}  // namespace

WiringDiagnostics validate_wiring(const Fragment& f) {
  WiringDiagnostics d;
  std::map<std::pair<int, int>, int> link_uses;  // (node, id) -> count
  for (const auto& l : f.links) {
    auto bad_endpoint = [&](int node, int id) {
      if (node < 0 || node >= static_cast<int>(f.nodes.size())) {
        std::ostringstream os;
        os << "link references unknown node " << node;
        d.issues.push_back(os.str());
        return true;
      }
      if (!f.nodes[node].has_wire(id)) {
        std::ostringstream os;
        os << "node " << node << " has no wire with id " << id;
        d.issues.push_back(os.str());
        return true;
      }
      return false;
    };
    if (bad_endpoint(l.node_a, l.id_a) || bad_endpoint(l.node_b, l.id_b))
      continue;
    const auto& wa = f.nodes[l.node_a].wire(l.id_a);
    const auto& wb = f.nodes[l.node_b].wire(l.id_b);
    if (wa.orientation == wb.orientation) {
      std::ostringstream os;
      os << "orientation mismatch on link (" << l.node_a << "," << l.id_a
         << ")-(" << l.node_b << "," << l.id_b << ")";
      d.issues.push_back(os.str());
    }
    if (wa.type != wb.type) {
      std::ostringstream os;
      os << "type mismatch on link (" << l.node_a << "," << l.id_a << ")-("
         << l.node_b << "," << l.id_b << "): " << wa.type.name << "/"
         << wa.type.dim << " vs " << wb.type.name << "/" << wb.type.dim;
      d.issues.push_back(os.str());
    }
    for (auto key : {std::pair{l.node_a, l.id_a}, std::pair{l.node_b, l.id_b}})
      if (++link_uses[key] > 1) {
        std::ostringstream os;
        os << "wire (" << key.first << "," << key.second
           << ") participates in more than one link";
        d.issues.push_back(os.str());
      }
  }
  // Shared subscript labels must come in matched pairs.
  std::map<int, int> id_count;
  for (const auto& n : f.nodes)
    for (const auto& w : n.factors()) ++id_count[w.id];
  for (const auto& [id, count] : id_count)
    if (count > 2) {
      std::ostringstream os;
      os << "id " << id << " appears " << count << " times";
      d.issues.push_back(os.str());
    }
  return d;
}

std::vector<Link> auto_links(const std::vector<OperatorTensor>& nodes) {
  std::map<int, std::vector<int>> holders;  // id -> node indices
  for (size_t i = 0; i < nodes.size(); ++i)
    for (const auto& w : nodes[i].factors())
      holders[w.id].push_back(static_cast<int>(i));
  std::vector<Link> links;
  for (const auto& [id, ns] : holders)
    if (ns.size() == 2) links.push_back({ns[0], id, ns[1], id});
  return links;
}

OperatorTensor contract(const Fragment& f, const Tolerances& tol) {
  const auto diag = validate_wiring(f);
  if (!diag.ok()) throw InvalidWiring(join(diag.issues));
  if (f.nodes.empty()) throw InvalidWiring("fragment has no nodes");

  std::vector<std::optional<OperatorTensor>> parts(f.nodes.begin(),
                                                   f.nodes.end());
  std::vector<int> owner(f.nodes.size());
  for (size_t i = 0; i < owner.size(); ++i) owner[i] = static_cast<int>(i);

  struct Pending {
    int part_a, id_a, part_b, id_b;
  };
  std::vector<Pending> pending;
  for (const auto& l : f.links)
    pending.push_back({owner[l.node_a], l.id_a, owner[l.node_b], l.id_b});

  auto resolve_self_loops = [&]() {
    for (auto it = pending.begin(); it != pending.end();) {
      if (it->part_a != it->part_b) {
        ++it;
        continue;
      }
      auto& part = *parts[it->part_a];
      const bool a_is_out =
          part.wire(it->id_a).orientation == Orientation::output;
      part = a_is_out ? self_contract(part, it->id_a, it->id_b)
                      : self_contract(part, it->id_b, it->id_a);
      it = pending.erase(it);
    }
  };

  resolve_self_loops();
  while (!pending.empty()) {
    // Group pending links by unordered part pair, then pick the pair whose
    // contraction result has the smallest dimension.
    std::map<std::pair<int, int>, std::vector<size_t>> groups;
    for (size_t i = 0; i < pending.size(); ++i) {
      const auto& p = pending[i];
      groups[{std::min(p.part_a, p.part_b), std::max(p.part_a, p.part_b)}]
          .push_back(i);
    }

    std::pair<int, int> best{-1, -1};
    long best_dim = 0;
    for (const auto& [pair, ls] : groups) {
      long linked = 1;
      for (size_t i : ls) {
        const auto& l = pending[i];
        linked *=
            parts[pair.first]->wire(l.part_a == pair.first ? l.id_a : l.id_b)
                .type.dim;
      }
      const long result_dim =
          (parts[pair.first]->dim() / linked) * (parts[pair.second]->dim() / linked);
      if (best.first < 0 || result_dim < best_dim) {
        best = pair;
        best_dim = result_dim;
      }
    }

    std::vector<std::pair<int, int>> id_pairs;
    for (size_t i : groups[best]) {
      const auto& l = pending[i];
      id_pairs.emplace_back(l.part_a == best.first ? l.id_a : l.id_b,
                            l.part_a == best.first ? l.id_b : l.id_a);
    }
    parts[best.first] =
        contract_pair(*parts[best.first], *parts[best.second], id_pairs);
    parts[best.second].reset();

    std::vector<Pending> next;
    const auto& consumed = groups[best];
    for (size_t i = 0; i < pending.size(); ++i) {
      if (std::binary_search(consumed.begin(), consumed.end(), i)) continue;
      Pending p = pending[i];
      if (p.part_a == best.second) p.part_a = best.first;
      if (p.part_b == best.second) p.part_b = best.first;
      next.push_back(p);
    }
    pending = std::move(next);
    resolve_self_loops();
  }

  std::optional<OperatorTensor> result;
  for (auto& part : parts) {
    if (!part) continue;
    result = result ? tensor_product(*result, *part) : *part;
  }
  (void)tol;
  return *result;
}

double circuit_probability(const Fragment& f, const Tolerances& tol) {
  for (size_t i = 0; i < f.nodes.size(); ++i)
    if (!check_physical(f.nodes[i], tol).ok()) {
      std::ostringstream os;
      os << "node " << i << " fails the physicality conditions";
      throw PhysicalityViolation(os.str());
    }
  const OperatorTensor result = contract(f, tol);
  if (!result.factors().empty())
    throw InvalidWiring("circuit has open wires");
  const double p = as_scalar(result, tol.eps_eq);
  if (p < -tol.eps_eq || p > 1.0 + tol.eps_eq) {
    std::ostringstream os;
    os << "circuit value " << p << " outside [0,1]";
    throw PhysicalityViolation(os.str());
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace optensor
