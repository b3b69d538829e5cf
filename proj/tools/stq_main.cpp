// Command-line front end: switch negativity scan, cross-formalism
// verification suites, PDM construction from files, process-matrix checks.
//
// Exit codes: 0 success, 1 tolerance failure, 2 physics-invariant violation,
// 3 schema violation, 4 dimension mismatch, 5 invalid process matrix.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "stq/json_io.hpp"
#include "stq/qswitch.hpp"
#include "stq/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitSchema = 3;
constexpr int kExitDimension = 4;
constexpr int kExitProcess = 5;

int worker_count() {
  if (const char* env = std::getenv("STQ_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void emit(const stq::json& report, const std::string& summary) {
  std::cout << report.dump(2) << std::endl;
  std::cerr << summary << std::endl;
}

int run_switch_scan(int steps, const std::string& out_path, bool parallel) {
  auto t0 = std::chrono::steady_clock::now();
  auto rows = stq::negativity_scan(steps, parallel ? worker_count() : 1);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot write " << out_path << std::endl;
    return kExitSchema;
  }
  out << stq::scan_to_csv(rows);
  out.close();

  // reduced PDMs expected positive must stay positive
  double max_zero = 0.0;
  for (const auto& r : rows) {
    max_zero = std::max({max_zero, r.f_c1a1a2, r.f_a1c2, r.f_a1a2});
    if (r.p_c == 0.0 || r.p_c == 1.0) max_zero = std::max(max_zero, r.f_a1c2a2);
  }
  bool ok = max_zero <= 1e-9;
  stq::json report{{"command", "switch-scan"},
                   {"steps", steps},
                   {"out", out_path},
                   {"rows", rows.size()},
                   {"max_expected_zero_negativity", max_zero},
                   {"parallel", parallel},
                   {"pass", ok}};
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "switch-scan: %zu rows -> %s (max expected-zero f = %.3e, %.2f s)",
                rows.size(), out_path.c_str(), max_zero, elapsed_since(t0));
  emit(report, buf);
  return ok ? kExitOk : kExitInvariant;
}

int run_verify(const std::string& suite, int trials, std::uint64_t seed, double tol) {
  auto t0 = std::chrono::steady_clock::now();
  auto results = stq::verify_suites(suite, trials, seed);
  bool pass = true;
  stq::json suites = stq::json::array();
  for (const auto& r : results) {
    stq::json devs = stq::json::object();
    for (const auto& [name, dev] : r.deviations) devs[name] = dev;
    bool p = r.pass(tol);
    pass = pass && p;
    suites.push_back(stq::json{{"suite", r.suite},
                               {"trials", r.trials},
                               {"seed", r.seed},
                               {"deviations", devs},
                               {"max_deviation", r.max_deviation()},
                               {"pass", p}});
  }
  stq::json report{{"command", "verify"}, {"suite", suite}, {"trials", trials},
                   {"seed", seed},        {"tol", tol},     {"suites", suites},
                   {"pass", pass}};
  std::string summary;
  for (const auto& r : results) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-10s max deviation %.3e  %s\n", r.suite.c_str(),
                  r.max_deviation(), r.pass(tol) ? "ok" : "FAIL");
    summary += buf;
  }
  {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "(%.2f s)", elapsed_since(t0));
    summary += buf;
  }
  emit(report, summary);
  return pass ? kExitOk : kExitTolerance;
}

int run_pdm_build(const std::string& in_path, const std::string& out_path) {
  stq::json j = stq::load_json_file(in_path);
  stq::CMat rho1 = stq::matrix_from_json(j.at("state"));
  std::vector<stq::CjMatrix> chain;
  for (const auto& ch : j.at("channels"))
    chain.push_back(stq::cj_matrix(stq::channel_from_json(ch)));
  stq::Pdm r = stq::build_closed_form(rho1, chain);
  if (!out_path.empty()) stq::save_json_file(out_path, stq::to_json(r));
  stq::json report{{"command", "pdm-build"},
                   {"slots", r.space.size()},
                   {"trace", r.trace()},
                   {"normalized", r.normalized}};
  if (r.normalized) report["negativity"] = stq::negativity(r);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "pdm-build: %zu slots, trace %.12g", r.space.size(),
                r.trace());
  emit(report, buf);
  return kExitOk;
}

stq::Pdm load_pdm_or_state(const stq::json& j) {
  if (j.contains("slots")) return stq::pdm_from_json(j);
  // a bare density matrix file is a single-time PDM
  stq::CMat m = stq::matrix_from_json(j);
  return stq::Pdm{m, stq::SlotSpace({{"t1", m.rows()}}), true};
}

int run_pdm_negativity(const std::string& in_path) {
  stq::Pdm r = load_pdm_or_state(stq::load_json_file(in_path));
  double f = stq::negativity(r);
  stq::json report{{"command", "pdm-negativity"}, {"negativity", f}};
  char buf[64];
  std::snprintf(buf, sizeof(buf), "negativity = %.12g", f);
  emit(report, buf);
  return kExitOk;
}

int run_pdm_marginal(const std::string& in_path, const std::string& out_path,
                     const std::vector<std::string>& keep) {
  stq::Pdm r = load_pdm_or_state(stq::load_json_file(in_path));
  stq::Pdm m = stq::marginal(r, keep);
  if (!out_path.empty()) stq::save_json_file(out_path, stq::to_json(m));
  stq::json report{{"command", "pdm-marginal"},
                   {"kept", keep},
                   {"trace", m.trace()}};
  if (m.normalized) report["negativity"] = stq::negativity(m);
  emit(report, "pdm-marginal: kept " + std::to_string(keep.size()) + " slots");
  return kExitOk;
}

int run_process_validate(const std::string& in_path, int samples, std::uint64_t seed) {
  stq::ProcessMatrix w = stq::process_from_json(stq::load_json_file(in_path));
  stq::ProcessReport rep = stq::validate(w, samples, seed);
  stq::json report{{"command", "process-validate"},
                   {"min_eigenvalue", rep.min_eigenvalue},
                   {"max_norm_deviation", rep.max_norm_deviation},
                   {"n_samples", rep.n_samples},
                   {"seed", rep.seed},
                   {"psd", rep.psd_ok},
                   {"normalization", rep.normalization_ok},
                   {"valid", rep.valid}};
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "process-validate: min eig %.3e, max norm deviation %.3e -> %s",
                rep.min_eigenvalue, rep.max_norm_deviation,
                rep.valid ? "valid" : "INVALID");
  emit(report, buf);
  return rep.valid ? kExitOk : kExitProcess;
}

int run_process_to_pdm(const std::string& w_path, const std::string& a_path,
                       const std::string& b_path, const std::string& out_path) {
  stq::ProcessMatrix w = stq::process_from_json(stq::load_json_file(w_path));
  stq::Instrument ia = stq::instrument_from_json(stq::load_json_file(a_path));
  stq::Instrument ib = stq::instrument_from_json(stq::load_json_file(b_path));
  Eigen::MatrixXd born = stq::born_table(w, ia, ib);
  Eigen::MatrixXd table = stq::process_to_pdm_table(w, ia, ib);
  double max_diff = (born - table).cwiseAbs().maxCoeff();
  auto table_json = [](const Eigen::MatrixXd& t) {
    stq::json rows = stq::json::array();
    for (int a = 0; a < t.rows(); ++a) {
      stq::json row = stq::json::array();
      for (int b = 0; b < t.cols(); ++b) row.push_back(t(a, b));
      rows.push_back(row);
    }
    return rows;
  };
  stq::json report{{"command", "process-to-pdm"},
                   {"w_file", w_path},
                   {"instruments", stq::json::array({a_path, b_path})},
                   {"table_pdm", table_json(table)},
                   {"table_born", table_json(born)},
                   {"max_abs_diff", max_diff}};
  if (!out_path.empty()) stq::save_json_file(out_path, report);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "process-to-pdm: max |born - pdm| = %.3e", max_diff);
  emit(report, buf);
  return kExitOk;
}

bool is_psd_error(const std::exception& e) {
  return std::string(e.what()).find("positive semidefinite") != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spatiotemporal quantum states: PDMs, two-time states, process matrices"};
  app.require_subcommand(1);

  // switch-scan
  auto* scan = app.add_subcommand("switch-scan", "negativity scan of the switched constant channels");
  int steps = 11;
  std::string scan_out = "scan.csv";
  bool parallel = false;
  scan->add_option("--steps", steps, "grid points per parameter")->check(CLI::Range(2, 1000));
  scan->add_option("--out", scan_out, "output CSV path")->required();
  scan->add_flag("--parallel", parallel, "parallelize over grid points (STQ_THREADS caps workers)");

  // verify
  auto* verify = app.add_subcommand("verify", "cross-formalism verification suites");
  std::string suite = "all";
  int trials = 100;
  std::uint64_t seed = 42;
  double tol = 1e-9;
  verify->add_option("--suite", suite, "pdm-oracle|abl|pure|ensemble|bridge|all");
  verify->add_option("--trials", trials, "trials per suite")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--tol", tol, "maximum allowed deviation");

  // pdm
  auto* pdm = app.add_subcommand("pdm", "build and inspect PDMs");
  pdm->require_subcommand(1);
  std::string pdm_in, pdm_out;
  std::vector<std::string> keep;
  auto* build = pdm->add_subcommand("build", "closed-form PDM from a state and channel list");
  build->add_option("--in", pdm_in, "JSON with {state, channels}")->required();
  build->add_option("--out", pdm_out, "output PDM JSON");
  auto* neg = pdm->add_subcommand("negativity", "trace-norm negativity of a PDM");
  neg->add_option("--in", pdm_in, "PDM JSON (or bare density matrix)")->required();
  auto* marg = pdm->add_subcommand("marginal", "partial trace onto named slots");
  marg->add_option("--in", pdm_in, "PDM JSON")->required();
  marg->add_option("--keep", keep, "slot labels to keep")->required();
  marg->add_option("--out", pdm_out, "output PDM JSON");

  // process
  auto* process = app.add_subcommand("process", "process-matrix checks and mappings");
  process->require_subcommand(1);
  std::string w_path, inst_a_path, inst_b_path, proc_out;
  int samples = 64;
  std::uint64_t proc_seed = 1;
  auto* pvalidate = process->add_subcommand("validate", "PSD and sampled-normalization check");
  pvalidate->add_option("--in", w_path, "process matrix JSON")->required();
  pvalidate->add_option("--samples", samples, "random instrument pairs");
  pvalidate->add_option("--seed", proc_seed, "sampling seed");
  auto* topdm = process->add_subcommand("to-pdm", "conditional PDM statistics vs the Born rule");
  topdm->add_option("--w", w_path, "process matrix JSON")->required();
  topdm->add_option("--inst-a", inst_a_path, "Alice instrument JSON")->required();
  topdm->add_option("--inst-b", inst_b_path, "Bob instrument JSON")->required();
  topdm->add_option("--out", proc_out, "write the report JSON here too");

  CLI11_PARSE(app, argc, argv);

  try {
    try {
      if (scan->parsed()) return run_switch_scan(steps, scan_out, parallel);
      if (verify->parsed()) return run_verify(suite, trials, seed, tol);
      if (build->parsed()) return run_pdm_build(pdm_in, pdm_out);
      if (neg->parsed()) return run_pdm_negativity(pdm_in);
      if (marg->parsed()) return run_pdm_marginal(pdm_in, pdm_out, keep);
      if (pvalidate->parsed()) return run_process_validate(w_path, samples, proc_seed);
      if (topdm->parsed()) return run_process_to_pdm(w_path, inst_a_path, inst_b_path, proc_out);
    } catch (const stq::json::exception& e) {
      std::cerr << "schema error: " << e.what() << std::endl;
      return kExitSchema;
    } catch (const std::domain_error& e) {
      if (is_psd_error(e)) {
        std::cerr << "invalid process matrix: " << e.what() << std::endl;
        return kExitProcess;
      }
      std::cerr << "invariant violation: " << e.what() << std::endl;
      return kExitInvariant;
    } catch (const std::invalid_argument& e) {
      std::cerr << "dimension mismatch: " << e.what() << std::endl;
      return kExitDimension;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitSchema;
  }
  return kExitOk;
}
