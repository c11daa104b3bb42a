// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "optensor/causaloid.hpp"
#include "optensor/fragment.hpp"
#include "optensor/io.hpp"
#include "optensor/lattice.hpp"
#include "optensor/opspace.hpp"
#include "optensor/physicality.hpp"
#include "testutil.hpp"

using namespace optensor;
namespace fs = std::filesystem;

namespace {

const WireType kQubit{"q", 2};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

// ---- 1. Born-rule oracle equivalence --------------------------------------

bool born_rule_equivalence(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  double worst = 0.0;

  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const long dim = 1L << n;
    const int n_channels = static_cast<int>(rng() % 5);  // ops = 2 + channels

    std::vector<OperatorTensor> nodes;
    std::vector<int> live(n);  // current wire id carrying qubit i
    int next_id = 1;
    for (int i = 0; i < n; ++i) live[i] = next_id++;

    const Matrix rho = testutil::random_density(static_cast<int>(dim), rng);
    std::vector<WireInstance> prep_wires;
    for (int i = 0; i < n; ++i) prep_wires.push_back(out_wire(kQubit, live[i]));
    nodes.emplace_back(prep_wires, rho);

    Matrix state = rho;
    for (int s = 0; s < n_channels; ++s) {
      const int span = 1 + static_cast<int>(rng() % std::min(n, 2));
      std::vector<int> qubits(n);
      std::iota(qubits.begin(), qubits.end(), 0);
      std::shuffle(qubits.begin(), qubits.end(), rng);
      qubits.resize(span);
      std::sort(qubits.begin(), qubits.end());

      const auto ks = testutil::random_channel(1 << span, 2, rng);
      std::vector<WireInstance> ins, outs;
      for (int q : qubits) ins.push_back(in_wire(kQubit, live[q]));
      for (int q : qubits) {
        live[q] = next_id++;
        outs.push_back(out_wire(kQubit, live[q]));
      }
      nodes.push_back(from_channel(ks, ins, outs));

      std::vector<Matrix> embedded;
      for (const auto& k : ks)
        embedded.push_back(testutil::embed(k, n, qubits));
      state = testutil::apply_kraus(state, embedded);
    }

    const Matrix eff = testutil::random_effect(static_cast<int>(dim), rng);
    std::vector<WireInstance> eff_wires;
    for (int i = 0; i < n; ++i) eff_wires.push_back(in_wire(kQubit, live[i]));
    nodes.emplace_back(eff_wires, eff);

    const double got = as_scalar(contract({nodes, auto_links(nodes)}), 1e-6);
    const double want = (state * eff).trace().real();
    worst = std::max(worst, std::abs(got - want));
  }

  const double elapsed = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof buf, "max deviation %.3g, %.1f s", worst, elapsed);
  detail = buf;
  return worst <= 1e-9 && elapsed <= 30.0;
}

// ---- 2. Physicality necessity ----------------------------------------------

bool physicality_necessity(std::string& detail) {
  std::mt19937_64 rng(2025);
  Tolerances tol;
  tol.eps_psd = 1e-9;
  int wrong_pass = 0, wrong_fail = 0;

  for (int trial = 0; trial < 200; ++trial) {
    OperatorTensor op = [&] {
      switch (trial % 3) {
        case 0:
          return from_state(testutil::random_density(2, rng),
                            out_wire(kQubit, 1));
        case 1:
          return from_effect(testutil::random_effect(2, rng),
                             in_wire(kQubit, 1));
        default:
          return from_channel(testutil::random_channel(2, 3, rng),
                              {in_wire(kQubit, 1)}, {out_wire(kQubit, 2)});
      }
    }();
    if (!check_physical(op, tol).ok()) ++wrong_fail;
  }

  for (int trial = 0; trial < 200; ++trial) {
    if (trial % 2 == 0) {
      // Channel scaled by 1.1: signals to the past.
      const auto chan = from_channel(testutil::random_channel(2, 3, rng),
                                     {in_wire(kQubit, 1)},
                                     {out_wire(kQubit, 2)});
      const OperatorTensor bad(chan.factors(), 1.1 * chan.matrix());
      if (check_physical(bad, tol).causal_ok) ++wrong_pass;
    } else {
      // Input transpose made negative by construction.
      Matrix n = testutil::random_density(4, rng);
      Eigen::SelfAdjointEigenSolver<Matrix> es(n, Eigen::EigenvaluesOnly);
      n -= (es.eigenvalues().minCoeff() + 0.01) * Matrix::Identity(4, 4);
      const OperatorTensor seed({out_wire(kQubit, 2), in_wire(kQubit, 1)}, n);
      const OperatorTensor bad(seed.factors(),
                               partial_transpose(seed, {1}).matrix());
      if (check_physical(bad, tol).psd_ok) ++wrong_pass;
    }
  }

  char buf[128];
  std::snprintf(buf, sizeof buf, "%d false fails, %d false passes", wrong_fail,
                wrong_pass);
  detail = buf;
  return wrong_fail == 0 && wrong_pass == 0;
}

// ---- 3. Complete-set normalization ------------------------------------------

bool instrument_normalization(std::string& detail) {
  std::mt19937_64 rng(2026);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int env = 4;
    const auto ks = testutil::random_channel(2, env, rng);
    const int branches = 2 + static_cast<int>(rng() % 3);
    std::vector<OperatorTensor> ops;
    Matrix sum = Matrix::Zero(2, 2);
    for (int b = 0; b < branches; ++b) {
      std::vector<Matrix> part;
      for (int e = b; e < env; e += branches) part.push_back(ks[e]);
      const auto op = from_channel(part, {in_wire(kQubit, 1)},
                                   {out_wire(kQubit, 2)});
      sum += partial_trace(op, {2}).matrix();
      ops.push_back(op);
    }
    worst = std::max(worst,
                     (sum - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff());
    if (!check_complete_set(ops)) {
      detail = "complete-set check failed";
      return false;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max deviation %.3g", worst);
  detail = buf;
  return worst <= 1e-10;
}

// ---- 4. Deterministic-effect uniqueness -------------------------------------

bool deterministic_effect_identity(std::string& detail) {
  std::mt19937_64 rng(2027);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const int outcomes = 2 + static_cast<int>(rng() % 3);
    // Random POVM: normalize positive operators by the inverse square root
    // of their sum.
    std::vector<Matrix> gs;
    Matrix s = Matrix::Zero(d, d);
    for (int i = 0; i < outcomes; ++i) {
      const Matrix g = testutil::ginibre(d, d, rng);
      gs.push_back(g * g.adjoint());
      s += gs.back();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    const Matrix inv_sqrt =
        es.eigenvectors() *
        es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
        es.eigenvectors().adjoint();

    Matrix sum = Matrix::Zero(d, d);
    for (const auto& g : gs) {
      Matrix e = inv_sqrt * g * inv_sqrt;
      e = (e + e.adjoint()) / 2.0;
      sum += from_effect(e, in_wire({"d", d}, 1), Tolerances{}).matrix();
    }
    worst = std::max(worst,
                     (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff());
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max deviation %.3g", worst);
  detail = buf;
  return worst <= 1e-12;
}

// ---- 5. Heralding soundness --------------------------------------------------

bool heralding_soundness(std::string& detail) {
  std::mt19937_64 rng(2028);
  int bad_yes = 0, bad_no = 0, bad_bounds = 0;

  for (int trial = 0; trial < 50; ++trial) {
    // Causally complete region: fixed preparation, one gate, full POVM
    // inside. External contexts only rescale the column.
    const Matrix rho = testutil::random_density(4, rng);
    const Matrix u = testutil::random_unitary(4, rng);
    const Matrix evolved = u * rho * u.adjoint();
    std::vector<double> born(4);
    std::vector<Matrix> povm;
    {
      const Matrix basis = testutil::random_unitary(4, rng);
      for (int o = 0; o < 4; ++o) {
        povm.push_back(basis.col(o) * basis.col(o).adjoint());
        born[o] = (evolved * povm.back()).trace().real();
      }
    }
    ProbabilityTable t;
    t.entries.resize(4, 5);
    std::uniform_real_distribution<double> uw(0.2, 1.0);
    for (int o = 0; o < 4; ++o) t.row_labels.push_back("o" + std::to_string(o));
    for (int c = 0; c < 5; ++c) {
      t.col_labels.push_back("c" + std::to_string(c));
      const double w = uw(rng);
      for (int o = 0; o < 4; ++o) t.entries(o, c) = born[o] * w;
    }
    const auto dec = decompose(t, minimal_fiducials(t));
    const auto rep = herald(dec.r.row(0).transpose(), dec.r.row(1).transpose());
    const double oracle = born[0] / born[1];
    if (!rep.heralded || std::abs(rep.k - oracle) > 1e-9) ++bad_yes;

    std::vector<Eigen::VectorXd> admissible;
    for (int c = 0; c < dec.p.cols(); ++c) admissible.push_back(dec.p.col(c));
    const auto [lo, hi] = herald_bounds(dec.r.row(0).transpose(),
                                        dec.r.row(1).transpose(), admissible);
    if (oracle < lo - 1e-9 || oracle > hi + 1e-9) ++bad_bounds;
  }

  for (int trial = 0; trial < 50; ++trial) {
    // No fixed preparation: the state entering the region depends on the
    // external context.
    const Matrix u = testutil::random_unitary(4, rng);
    std::vector<Matrix> povm;
    const Matrix basis = testutil::random_unitary(4, rng);
    for (int o = 0; o < 4; ++o)
      povm.push_back(basis.col(o) * basis.col(o).adjoint());
    ProbabilityTable t;
    t.entries.resize(4, 6);
    for (int o = 0; o < 4; ++o) t.row_labels.push_back("o" + std::to_string(o));
    for (int c = 0; c < 6; ++c) {
      t.col_labels.push_back("c" + std::to_string(c));
      const Matrix rho = testutil::random_density(4, rng);
      const Matrix evolved = u * rho * u.adjoint();
      for (int o = 0; o < 4; ++o)
        t.entries(o, c) = (evolved * povm[o]).trace().real();
    }
    const auto dec = decompose(t, minimal_fiducials(t));
    const auto rep = herald(dec.r.row(0).transpose(), dec.r.row(1).transpose());
    if (rep.heralded || rep.residual <= 1e-3) ++bad_no;
  }

  char buf[128];
  std::snprintf(buf, sizeof buf,
                "%d heralding misses, %d spurious heralds, %d bound failures",
                bad_yes, bad_no, bad_bounds);
  detail = buf;
  return bad_yes == 0 && bad_no == 0 && bad_bounds == 0;
}

// ---- 6 & 7. Witness discrimination and truncation schedule -------------------

const std::vector<std::pair<int, int>> kStaircase{{0, 0}, {1, 1}, {2, 2}};

bool schedule_ok(const WitnessReport& report, int D) {
  for (const auto& per_m : report.diagnostics)
    for (const auto& steps : per_m) {
      const int n_steps = static_cast<int>(steps.size());
      for (const auto& rec : steps)
        if (rec.k_n !=
            static_cast<long long>(D) << (n_steps - rec.n + 1))
          return false;
    }
  return true;
}

bool witness_discrimination(std::string& detail, bool& schedule_exact) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2029);
  schedule_exact = true;
  int bad_physical = 0, bad_signaling = 0;

  for (int trial = 0; trial < 10; ++trial) {
    LatticeSpec lat;
    for (auto [r, c] : kStaircase)
      lat.vertex_ops[r * lat.width + c] =
          gate_vertex(testutil::random_unitary(4, rng));
    SweepOptions opt;
    opt.seed = 3000 + trial;
    const auto report = witness_sweep(build_region_operator(lat, kStaircase),
                                      SpacetimeBackground{}, opt);
    schedule_exact = schedule_exact && schedule_ok(report, opt.D);
    bool decreasing = true;
    for (size_t i = 1; i < report.rows.size(); ++i)
      decreasing = decreasing &&
                   report.rows[i].W_l <= report.rows[i - 1].W_l + 1e-15;
    if (!report.physical || !decreasing ||
        report.rows.back().W_l >= 1e-6)
      ++bad_physical;
  }

  for (int trial = 0; trial < 10; ++trial) {
    LatticeSpec lat;
    for (auto [r, c] : kStaircase)
      lat.vertex_ops[r * lat.width + c] =
          gate_vertex(testutil::random_unitary(4, rng));
    // Signaling injection: fixed-output vertex whose output trace is not the
    // identity on its inputs.
    Matrix zero = Matrix::Zero(2, 2);
    zero(0, 0) = 1;
    const Matrix g = testutil::ginibre(4, 1, rng);
    const Matrix phi = g * g.adjoint() / (g.adjoint() * g)(0, 0).real();
    lat.vertex_ops[1 * lat.width + 1] = kron(kron(zero, zero) * 4.0, phi);
    SweepOptions opt;
    opt.seed = 4000 + trial;
    const auto report = witness_sweep(build_region_operator(lat, kStaircase),
                                      SpacetimeBackground{}, opt);
    schedule_exact = schedule_exact && schedule_ok(report, opt.D);
    double min_w = report.rows[0].W_l;
    for (const auto& row : report.rows) min_w = std::min(min_w, row.W_l);
    if (report.physical || min_w < 0.01) ++bad_signaling;
  }

  const double elapsed = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "%d physical misses, %d signaling misses, %.1f s",
                bad_physical, bad_signaling, elapsed);
  detail = buf;
  return bad_physical == 0 && bad_signaling == 0 && elapsed <= 600.0;
}

// ---- 8. PPT spot value --------------------------------------------------------

bool bell_ppt_value(std::string& detail) {
  const OperatorTensor bell({out_wire(kQubit, 1), out_wire(kQubit, 2)},
                            testutil::bell_projector());
  const double min_eig = eigenvalues(partial_transpose(bell, {2})).minCoeff();
  char buf[64];
  std::snprintf(buf, sizeof buf, "min eigenvalue %.17g", min_eig);
  detail = buf;
  return std::abs(min_eig + 0.5) <= 1e-12;
}

// ---- 9. Gamma invariance --------------------------------------------------------

bool gamma_invariance(std::string& detail) {
  std::mt19937_64 rng(2030);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const int points = 5 + static_cast<int>(rng() % 40);
    const int k = 1 + static_cast<int>(rng() % 4);
    FieldSample f;
    for (int i = 0; i < points; ++i) {
      Eigen::VectorXd s(k);
      for (int j = 0; j < k; ++j) s(j) = u(rng);
      f.scalars[i] = s;
    }
    const auto gamma = compute_gamma(f);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<int> ids(points);
      std::iota(ids.begin(), ids.end(), 0);
      std::shuffle(ids.begin(), ids.end(), rng);
      FieldSample g;
      for (int i = 0; i < points; ++i) g.scalars[ids[i]] = f.scalars[i];
      if (compute_gamma(g).points != gamma.points) {
        detail = "set mismatch after relabeling";
        return false;
      }
    }
  }
  detail = "2000 relabelings, exact equality";
  return true;
}

// ---- 10. CLI determinism ---------------------------------------------------------

std::string run_and_read(const std::string& cmd, const fs::path& out) {
  const std::string full = cmd + " > " + out.string() + " 2>/dev/null";
  std::system(full.c_str());
  return io::read_file(out.string());
}

bool cli_determinism(std::string& detail) {
  const fs::path dir = fs::temp_directory_path() / "optensor-acceptance";
  fs::create_directories(dir);
  const std::string cli = OPTENSOR_CLI_PATH;

  const auto op = from_channel({Matrix::Identity(2, 2)}, {in_wire(kQubit, 1)},
                               {out_wire(kQubit, 2)});
  const std::string op_path = (dir / "op.json").string();
  io::write_file(op_path, io::dump(io::operator_to_json(op)));

  Matrix rho(2, 2);
  rho << 1, 0, 0, 0;
  io::json circuit{
      {"nodes",
       {io::operator_to_json(from_state(rho, out_wire(kQubit, 1))),
        io::operator_to_json(
            from_effect(Matrix::Identity(2, 2), in_wire(kQubit, 1)))}}};
  const std::string circuit_path = (dir / "circuit.json").string();
  io::write_file(circuit_path, io::dump(circuit));

  const std::string table_path = (dir / "table.csv").string();
  io::write_file(table_path, "row,c0,c1\nr0,.2,.4\nr1,.4,.8\n");

  io::json lattice{{"width", 4},
                   {"height", 4},
                   {"region", {{0, 0}, {1, 1}}},
                   {"vertices", io::json::array()}};
  const std::string lattice_path = (dir / "lattice.json").string();
  io::write_file(lattice_path, io::dump(lattice));

  const std::string field_path = (dir / "field.csv").string();
  io::write_file(field_path, "1,0.5\n2,0.25\n3,0.5\n");

  const std::vector<std::string> commands{
      cli + " check " + op_path,
      cli + " contract --oracle " + circuit_path,
      cli + " herald " + table_path + " --row r0 --row2 r1",
      cli + " witness " + lattice_path + " --m-max 4 --seed 7 --format csv",
      cli + " witness " + lattice_path + " --m-max 3 --seed 9",
      cli + " gamma " + field_path,
  };
  for (size_t i = 0; i < commands.size(); ++i) {
    const auto a = run_and_read(commands[i], dir / ("a" + std::to_string(i)));
    const auto b = run_and_read(commands[i], dir / ("b" + std::to_string(i)));
    if (a.empty() || a != b) {
      detail = "output differs for: " + commands[i];
      return false;
    }
  }
  detail = "all subcommands byte-identical across reruns";
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool passed;
    std::string detail;
  };
  std::vector<Criterion> results;
  bool schedule_exact = false;

  {
    std::string d;
    results.push_back({"1. Born-rule oracle equivalence (500 circuits)",
                       born_rule_equivalence(d), d});
  }
  {
    std::string d;
    results.push_back({"2. Physicality necessity (200 valid + 200 violators)",
                       physicality_necessity(d), d});
  }
  {
    std::string d;
    results.push_back({"3. Instrument normalization (100 instruments)",
                       instrument_normalization(d), d});
  }
  {
    std::string d;
    results.push_back({"4. Deterministic-effect identity (complete POVMs)",
                       deterministic_effect_identity(d), d});
  }
  {
    std::string d;
    results.push_back({"5. Heralding soundness (50 + 50 regions)",
                       heralding_soundness(d), d});
  }
  {
    std::string d;
    const bool ok = witness_discrimination(d, schedule_exact);
    results.push_back({"6. Witness discrimination (10 + 10 operators)", ok, d});
  }
  results.push_back({"7. Truncation schedule K_n = D*2^(N-n+1)",
                     schedule_exact, schedule_exact ? "exact" : "mismatch"});
  {
    std::string d;
    results.push_back({"8. Bell partial-transpose spot value", bell_ppt_value(d), d});
  }
  {
    std::string d;
    results.push_back({"9. Gamma relabeling invariance (100 x 20)",
                       gamma_invariance(d), d});
  }
  {
    std::string d;
    results.push_back({"10. CLI determinism", cli_determinism(d), d});
  }

  bool all = true;
  for (const auto& r : results) {
    std::printf("%s: %s (%s)\n", r.passed ? "PASS" : "FAIL", r.name,
                r.detail.c_str());
    all = all && r.passed;
  }
  return all ? 0 : 1;
}
