#include <cstdio>
#include <map>
#include <optional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "optensor/io.hpp"

namespace {

using namespace optensor;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;
constexpr int kExitNotHeralded = 3;

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty())
    std::cout << text;
  else
    io::write_file(output_path, text);
}

std::string format_scalar(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g\n", x);
  return buf;
}

int run_check(const std::string& path, const Tolerances& tol,
              const std::string& output) {
  const OperatorTensor op = io::load_operator(path);
  const PhysicalityVerdict v = check_physical(op, tol);
  emit(io::dump(io::verdict_to_json(v)) + "\n", output);
  return v.ok() ? kExitOk : kExitCheckFailed;
}

int run_contract(const std::string& path, bool oracle, const Tolerances& tol,
                 const std::string& output) {
  const Fragment f = io::load_circuit(path);
  const OperatorTensor result = contract(f, tol);
  if (oracle) {
    // Independent evaluation: relabel every wire, take one big product, then
    // contract the links one at a time.
    std::map<std::pair<int, int>, int> fresh;  // (node, id) -> unique id
    int next_id = 1;
    std::optional<OperatorTensor> product;
    for (size_t i = 0; i < f.nodes.size(); ++i) {
      std::vector<WireInstance> factors = f.nodes[i].factors();
      for (auto& w : factors) {
        fresh[{static_cast<int>(i), w.id}] = next_id;
        w.id = next_id++;
      }
      OperatorTensor renamed(std::move(factors), f.nodes[i].matrix());
      product = product ? tensor_product(*product, renamed) : renamed;
    }
    OperatorTensor alt = *product;
    for (const auto& l : f.links) {
      const int ia = fresh.at({l.node_a, l.id_a});
      const int ib = fresh.at({l.node_b, l.id_b});
      const bool a_is_out = alt.wire(ia).orientation == Orientation::output;
      alt = a_is_out ? self_contract(alt, ia, ib)
                     : self_contract(alt, ib, ia);
    }
    if (!result.factors().empty()) {
      std::cerr << "oracle mode needs a closed circuit\n";
      return kExitUsage;
    }
    const double a = as_scalar(result, tol.eps_eq);
    const double b = as_scalar(alt, tol.eps_eq);
    emit(format_scalar(a) + format_scalar(b) + format_scalar(a - b), output);
    return kExitOk;
  }
  if (result.factors().empty()) {
    emit(format_scalar(as_scalar(result, tol.eps_eq)), output);
  } else {
    emit(io::dump(io::operator_to_json(result)) + "\n", output);
  }
  return kExitOk;
}

int run_herald(const std::string& path, const std::string& row,
               const std::string& row2, double tol_prop,
               const Tolerances& tol, const std::string& output) {
  const ProbabilityTable t = io::load_table(path);
  const FiducialSet omega = minimal_fiducials(t, tol.eps_eq);
  const Decomposition d = decompose(t, omega, tol.eps_eq);
  const HeraldReport rep = herald(d.r.row(t.row_index(row)).transpose(),
                                  d.r.row(t.row_index(row2)).transpose(),
                                  tol_prop);
  emit(io::dump(io::herald_to_json(rep)) + "\n", output);
  return rep.heralded ? kExitOk : kExitNotHeralded;
}

int run_witness(const std::string& path, const SweepOptions& opt,
                const Tolerances& tol, const std::string& output,
                const std::string& format) {
  const auto [lat, region] = io::load_lattice(path);
  const RegionOperator a = build_region_operator(lat, region, opt.L, tol);
  const WitnessReport report = witness_sweep(a, SpacetimeBackground{}, opt, tol);
  if (format == "csv")
    emit(io::sweep_to_csv(report), output);
  else
    emit(io::dump(io::witness_to_json(report)) + "\n", output);
  return report.physical ? kExitOk : kExitCheckFailed;
}

int run_gamma(const std::string& path, const std::vector<double>& lo,
              const std::vector<double>& hi, const std::string& output) {
  const FieldSample f = io::load_field_sample(path);
  GammaSurface g = compute_gamma(f);
  if (!lo.empty() || !hi.empty()) {
    if (lo.size() != hi.size()) {
      std::cerr << "--lo and --hi need the same number of values\n";
      return kExitUsage;
    }
    OpRegion r;
    r.lo = Eigen::Map<const Eigen::VectorXd>(lo.data(), lo.size());
    r.hi = Eigen::Map<const Eigen::VectorXd>(hi.data(), hi.size());
    g = region_outcome(g, r);
  }
  emit(io::dump(io::gamma_to_json(g)) + "\n", output);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-tensor process engine"};
  app.require_subcommand(1);

  Tolerances tol;
  std::string output;
  app.add_option("--tolerance-psd", tol.eps_psd, "positivity slack");
  app.add_option("--tolerance-eq", tol.eps_eq, "equality slack");
  app.add_option("--output", output, "write the report here instead of stdout");

  std::string check_file;
  auto* check = app.add_subcommand("check", "physicality conditions");
  check->add_option("file", check_file, "operator JSON")->required();

  std::string circuit_file;
  bool oracle = false;
  auto* contract_cmd = app.add_subcommand("contract", "contract a circuit");
  contract_cmd->add_option("file", circuit_file, "circuit JSON")->required();
  contract_cmd->add_flag("--oracle", oracle,
                         "also print an independent evaluation and the difference");

  std::string table_file, row, row2;
  double tol_prop = Tolerances{}.eps_prop;
  auto* herald_cmd = app.add_subcommand("herald", "prediction heralding");
  herald_cmd->add_option("file", table_file, "probability table CSV")->required();
  herald_cmd->add_option("--row", row, "[outcome|setting] row label")->required();
  herald_cmd->add_option("--row2", row2, "reference row label")->required();
  herald_cmd->add_option("--tolerance-prop", tol_prop, "proportionality slack");

  std::string lattice_file, format = "json";
  SweepOptions sweep;
  bool use_grid = false, use_sprinkle = false;
  auto* witness_cmd = app.add_subcommand("witness", "physicality witness sweep");
  witness_cmd->add_option("file", lattice_file, "lattice JSON")->required();
  witness_cmd->add_option("--L", sweep.L, "region extent");
  witness_cmd->add_option("--m-max", sweep.m_max, "finest scale L/m");
  witness_cmd->add_option("--D", sweep.D, "truncation base");
  witness_cmd->add_option("--seed", sweep.seed, "random seed");
  witness_cmd->add_option("--epsilon-witness", sweep.eps_witness,
                          "convergence threshold");
  witness_cmd->add_flag("--grid", use_grid, "regular grid point process");
  witness_cmd->add_flag("--sprinkle", use_sprinkle, "Poisson point process");
  witness_cmd->add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string field_file;
  std::vector<double> lo, hi;
  auto* gamma_cmd = app.add_subcommand("gamma", "scalar coincidence surface");
  gamma_cmd->add_option("file", field_file, "field sample CSV")->required();
  gamma_cmd->add_option("--lo", lo, "region lower bounds");
  gamma_cmd->add_option("--hi", hi, "region upper bounds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(check_file, tol, output);
    if (contract_cmd->parsed())
      return run_contract(circuit_file, oracle, tol, output);
    if (herald_cmd->parsed())
      return run_herald(table_file, row, row2, tol_prop, tol, output);
    if (witness_cmd->parsed()) {
      sweep.grid = use_grid || !use_sprinkle;
      return run_witness(lattice_file, sweep, tol, output, format);
    }
    if (gamma_cmd->parsed()) return run_gamma(field_file, lo, hi, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
