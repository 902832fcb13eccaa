#ifndef IFSTBC_SIM_HPP
#define IFSTBC_SIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ifstbc/analysis.hpp"
#include "ifstbc/stbc.hpp"

namespace ifstbc {

enum class ReceiverKind { integer_forcing, zero_forcing, mmse, ml };

ReceiverKind parse_receiver(const std::string& name);  // if | zf | mmse | ml
std::string receiver_name(ReceiverKind r);

struct SimConfig {
  std::string design = "alamouti";  // alamouti | vblast | vblast:N | file:PATH
  std::size_t nr = 1;
  std::size_t sqrt_m = 2;
  ReceiverKind receiver = ReceiverKind::integer_forcing;
  double snr_start_db = 0.0;
  double snr_stop_db = 20.0;
  double snr_step_db = 5.0;
  std::uint64_t max_trials = 100000;
  std::uint64_t target_errors = 200;  // 0 disables early stopping
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0 picks hardware concurrency
};

struct BerRecord {
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
  double wall_seconds = 0.0;
};

LinearDesign resolve_design(const std::string& spec);
void parse_snr_range(const std::string& text, SimConfig& cfg);  // "START:STOP:STEP"
std::vector<double> snr_grid(const SimConfig& cfg);

// Monte Carlo bit error rate sweep.  Each trial draws a fresh channel, a
// uniform symbol vector and noise from a counter-derived per-trial seed, so
// the output is identical for any worker count and stops exactly at
// target_errors regardless of scheduling.
std::vector<BerRecord> run_ber_sweep(const SimConfig& cfg);

// Closed-form curves on the same SNR grid; name is one of
// theorem1 | vblast | lemma1 | chernoff (the latter two are evaluated on one
// channel drawn from cfg.seed).  Values are clipped to 1.
BoundCurve run_bound_eval(const SimConfig& cfg, const std::string& bound_name);

struct NvsReport {
  std::string design;
  long long coeff_bound = 0;
  NvsResult full;
  NvsResult nonzero;
  bool pass = false;  // full-mode minimum strictly positive
};

NvsReport run_nvs_report(const std::string& design_spec, long long coeff_bound);

std::string format_ber_csv(const std::vector<BerRecord>& records);
std::string format_bound_csv(const BoundCurve& curve);
std::string format_nvs_report(const NvsReport& report);

}  // namespace ifstbc

#endif
