#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ifstbc/sim.hpp"

namespace {

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ifstbc::ConfigError("cannot open output file: " + out_path);
  out << payload;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"integer-forcing linear receiver lab for space-time block codes"};
  app.require_subcommand(1);

  ifstbc::SimConfig cfg;
  std::string snr_text, out_path, receiver_text = "if", bound_name = "theorem1";
  long long coeff_bound = 3;

  const auto add_common = [&](CLI::App* sub, bool with_receiver) {
    sub->add_option("--design", cfg.design, "alamouti | vblast | vblast:N | file:PATH");
    sub->add_option("--nr", cfg.nr, "number of receive antennas");
    sub->add_option("--sqrt-m", cfg.sqrt_m, "ring size sqrt(M); a power of two");
    if (with_receiver) sub->add_option("--receiver", receiver_text, "if | zf | mmse | ml");
    sub->add_option("--snr", snr_text, "SNR grid in dB as START:STOP:STEP");
    sub->add_option("--trials", cfg.max_trials, "trial cap per SNR point");
    sub->add_option("--target-errors", cfg.target_errors,
                    "stop a point after this many bit errors (0 = run the full cap)");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--workers", cfg.workers, "worker threads (0 = hardware concurrency)");
    sub->add_option("--out", out_path, "write output here instead of stdout");
    sub->set_config("--config", "", "key=value file mirroring these flags; flags win");
  };

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo bit error rate sweep");
  add_common(sim, true);

  CLI::App* bound = app.add_subcommand("bound", "closed-form error bound curves");
  add_common(bound, false);
  bound->add_option("--bound", bound_name, "theorem1 | vblast | lemma1 | chernoff");

  CLI::App* nvs = app.add_subcommand("nvs", "non-vanishing singular value report");
  nvs->add_option("--design", cfg.design, "alamouti | vblast | vblast:N | file:PATH");
  nvs->add_option("--coeff-bound", coeff_bound, "search box half width (>= 1)");
  nvs->add_option("--out", out_path, "write output here instead of stdout");
  nvs->set_config("--config", "", "key=value file mirroring these flags; flags win");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!snr_text.empty()) ifstbc::parse_snr_range(snr_text, cfg);
    cfg.receiver = ifstbc::parse_receiver(receiver_text);

    if (sim->parsed()) {
      const std::vector<ifstbc::BerRecord> records = ifstbc::run_ber_sweep(cfg);
      for (const ifstbc::BerRecord& r : records)
        std::cerr << "snr " << r.snr_db << " dB: trials " << r.trials << ", bit errors "
                  << r.bit_errors << ", ber " << r.ber << "\n";
      emit(ifstbc::format_ber_csv(records), out_path);
    } else if (bound->parsed()) {
      emit(ifstbc::format_bound_csv(ifstbc::run_bound_eval(cfg, bound_name)), out_path);
    } else {
      emit(ifstbc::format_nvs_report(ifstbc::run_nvs_report(cfg.design, coeff_bound)), out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
