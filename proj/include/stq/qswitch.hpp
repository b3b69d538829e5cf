#pragma once

#include <string>
#include <vector>

#include "stq/pdm.hpp"

namespace stq {

/// Parameters of the switch experiment: pure control and system states
/// |psi> = sqrt(p)|0> + sqrt(1-p)|1> per subsystem.
struct SwitchConfig {
  double p_a = 0.5;  // system amplitude parameter
  double p_c = 0.5;  // control amplitude parameter
};

/// One grid point of the negativity scan.
struct ScanRow {
  double p_a = 0.0;
  double p_c = 0.0;
  double f_a1c2a2 = 0.0;
  double f_c1a1a2 = 0.0;
  double f_a1c2 = 0.0;
  double f_a1a2 = 0.0;
};

/// The qubit reset channel: maps every state to I/2. Kraus operators
/// {|0><0|, |1><0|, |0><1|, |1><1|} / sqrt(2).
Channel constant_channel();

/// Control-conditioned superposition of the two orders of n1 and n2 on
/// control (x) system: Kraus S_ij = |0><0| (x) K2_i K1_j + |1><1| (x) K1_j K2_i.
Channel switch_channel(const Channel& n1, const Channel& n2);

/// Two-time PDM of the switched constant channels over qubit slots
/// (C1, A1, C2, A2).
Pdm switch_pdm(const SwitchConfig& cfg);

/// Negativities of the four reduced PDMs on a steps x steps grid over
/// [0,1]^2, rows in p_a-major order. `n_threads` <= 1 runs serially.
std::vector<ScanRow> negativity_scan(int steps, int n_threads = 1);

/// CSV encoding of the scan: fixed header, 9 decimal places.
std::string scan_to_csv(const std::vector<ScanRow>& rows);

}  // namespace stq
