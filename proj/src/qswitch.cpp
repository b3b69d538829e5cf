#include "stq/qswitch.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace stq {

Channel constant_channel() {
  double c = std::sqrt(0.5);
  std::vector<CMat> kraus;
  for (int out = 0; out < 2; ++out)
    for (int in = 0; in < 2; ++in) {
      CMat k = CMat::Zero(2, 2);
      k(out, in) = c;
      kraus.push_back(std::move(k));
    }
  return Channel(2, 2, std::move(kraus));
}

Channel switch_channel(const Channel& n1, const Channel& n2) {
  if (n1.dim_in != 2 || n1.dim_out != 2 || n2.dim_in != 2 || n2.dim_out != 2)
    throw std::invalid_argument("switch_channel expects qubit channels");
  CMat p0 = CMat::Zero(2, 2), p1 = CMat::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  std::vector<CMat> kraus;
  kraus.reserve(n1.kraus.size() * n2.kraus.size());
  for (const auto& k2 : n2.kraus)
    for (const auto& k1 : n1.kraus)
      kraus.push_back(kron(p0, k2 * k1) + kron(p1, k1 * k2));
  return Channel(4, 4, std::move(kraus));
}

namespace {

CVec amplitude_ket(double p) {
  CVec v(2);
  v[0] = std::sqrt(p);
  v[1] = std::sqrt(1.0 - p);
  return v;
}

}  // namespace

Pdm switch_pdm(const SwitchConfig& cfg) {
  if (cfg.p_a < 0 || cfg.p_a > 1 || cfg.p_c < 0 || cfg.p_c > 1)
    throw std::invalid_argument("switch parameters must lie in [0,1]");
  CVec psi_c = amplitude_ket(cfg.p_c);
  CVec psi_a = amplitude_ket(cfg.p_a);
  CMat rho1 = kron(CMat(psi_c * psi_c.adjoint()), CMat(psi_a * psi_a.adjoint()));
  Channel n = constant_channel();
  CjMatrix m = cj_matrix(switch_channel(n, n));
  Pdm coarse = build_closed_form(rho1, {m});
  return reslot(coarse, SlotSpace::qubits({"C1", "A1", "C2", "A2"}));
}

namespace {

ScanRow scan_point(double p_a, double p_c) {
  Pdm r = switch_pdm({p_a, p_c});
  ScanRow row;
  row.p_a = p_a;
  row.p_c = p_c;
  row.f_a1c2a2 = negativity(marginal(r, {"A1", "C2", "A2"}));
  row.f_c1a1a2 = negativity(marginal(r, {"C1", "A1", "A2"}));
  row.f_a1c2 = negativity(marginal(r, {"A1", "C2"}));
  row.f_a1a2 = negativity(marginal(r, {"A1", "A2"}));
  return row;
}

}  // namespace

std::vector<ScanRow> negativity_scan(int steps, int n_threads) {
  if (steps < 2) throw std::invalid_argument("negativity_scan needs steps >= 2");
  std::vector<ScanRow> rows(static_cast<std::size_t>(steps) * steps);
  auto value = [steps](int k) { return static_cast<double>(k) / (steps - 1); };
  auto work = [&](int begin, int end) {
    for (int idx = begin; idx < end; ++idx)
      rows[idx] = scan_point(value(idx / steps), value(idx % steps));
  };
  const int total = steps * steps;
  if (n_threads <= 1) {
    work(0, total);
    return rows;
  }
  n_threads = std::min<int>(n_threads, total);
  std::vector<std::thread> pool;
  int chunk = (total + n_threads - 1) / n_threads;
  for (int t = 0; t < n_threads; ++t)
    pool.emplace_back(work, t * chunk, std::min(total, (t + 1) * chunk));
  for (auto& th : pool) th.join();
  return rows;
}

std::string scan_to_csv(const std::vector<ScanRow>& rows) {
  std::string out = "p_a,p_c,f_a1c2a2,f_c1a1a2,f_a1c2,f_a1a2\n";
  char line[160];
  for (const auto& r : rows) {
    // suppress roundoff-negative zeros so corner rows print as exact zeros
    auto snap = [](double v) { return (v < 0 && v > -1e-12) ? 0.0 : v; };
    std::snprintf(line, sizeof(line), "%.9f,%.9f,%.9f,%.9f,%.9f,%.9f\n", r.p_a, r.p_c,
                  snap(r.f_a1c2a2), snap(r.f_c1a1a2), snap(r.f_a1c2), snap(r.f_a1a2));
    out += line;
  }
  return out;
}

}  // namespace stq
