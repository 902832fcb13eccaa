#include "ifstbc/sim.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <thread>

#include "ifstbc/channel.hpp"
#include "ifstbc/numerics.hpp"
#include "ifstbc/receiver.hpp"
#include "ifstbc/rng.hpp"

namespace ifstbc {

ReceiverKind parse_receiver(const std::string& name) {
  if (name == "if") return ReceiverKind::integer_forcing;
  if (name == "zf") return ReceiverKind::zero_forcing;
  if (name == "mmse") return ReceiverKind::mmse;
  if (name == "ml") return ReceiverKind::ml;
  throw ConfigError("unknown receiver: " + name + " (want if|zf|mmse|ml)");
}

std::string receiver_name(ReceiverKind r) {
  switch (r) {
    case ReceiverKind::integer_forcing: return "if";
    case ReceiverKind::zero_forcing: return "zf";
    case ReceiverKind::mmse: return "mmse";
    case ReceiverKind::ml: return "ml";
  }
  return "?";
}

LinearDesign resolve_design(const std::string& spec) {
  if (spec == "alamouti") return make_alamouti();
  if (spec == "vblast") return make_vblast(2);
  if (spec.rfind("vblast:", 0) == 0) {
    const std::string arg = spec.substr(7);
    std::size_t used = 0;
    long long nt = 0;
    try {
      nt = std::stoll(arg, &used);
    } catch (...) {
      throw ConfigError("bad vblast antenna count: " + spec);
    }
    if (used != arg.size() || nt < 1 || nt > 8)
      throw ConfigError("bad vblast antenna count: " + spec);
    return make_vblast(static_cast<std::size_t>(nt));
  }
  if (spec.rfind("file:", 0) == 0) return load_design(spec.substr(5));
  throw ConfigError("unknown design: " + spec + " (want alamouti|vblast|vblast:N|file:PATH)");
}

void parse_snr_range(const std::string& text, SimConfig& cfg) {
  double a = 0.0, b = 0.0, s = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> a >> c1 >> b >> c2 >> s) || c1 != ':' || c2 != ':' || (in >> std::ws, !in.eof()))
    throw ConfigError("bad snr range: " + text + " (want START:STOP:STEP)");
  cfg.snr_start_db = a;
  cfg.snr_stop_db = b;
  cfg.snr_step_db = s;
}

std::vector<double> snr_grid(const SimConfig& cfg) {
  if (cfg.snr_stop_db < cfg.snr_start_db)
    throw ConfigError("snr range: stop is below start");
  if (cfg.snr_stop_db > cfg.snr_start_db && !(cfg.snr_step_db > 0.0))
    throw ConfigError("snr range: step must be positive");
  std::vector<double> grid;
  if (cfg.snr_stop_db == cfg.snr_start_db) {
    grid.push_back(cfg.snr_start_db);
    return grid;
  }
  const double span = cfg.snr_stop_db - cfg.snr_start_db;
  const std::size_t n = static_cast<std::size_t>(std::floor(span / cfg.snr_step_db + 1e-9)) + 1;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) grid.push_back(cfg.snr_start_db + cfg.snr_step_db * i);
  return grid;
}

// ---- sweep engine ---------------------------------------------------------------

namespace {

struct SweepContext {
  SimConfig cfg;
  Constellation cons;
  PreparedDesign prepared;
  MlCodebook codebook;  // only filled for the ml receiver
  std::size_t n2k = 0;
  std::size_t bits_per_word = 0;
};

// Trials are seeded from (master, point, trial), never from worker identity.
std::uint32_t run_one_trial(const SweepContext& ctx, double P, std::size_t point_index,
                            std::uint64_t trial_index) {
  GaussianSampler g(derive_seed(ctx.cfg.seed, point_index, trial_index));

  const ChannelRealization ch = sample_channel(ctx.cfg.nr, ctx.prepared, g);
  std::vector<int> s(ctx.n2k);
  for (std::size_t k = 0; k < ctx.n2k; ++k)
    s[k] = static_cast<int>(g.raw().uniform_pow2(ctx.cons.sqrt_m));
  const ReceivedVector rv = transmit(ch, s, ctx.cons, P, g);

  DecodeResult dec;
  switch (ctx.cfg.receiver) {
    case ReceiverKind::integer_forcing: {
      const std::size_t nt = ctx.prepared.design.nt;
      try {
        dec = if_decode(rv, build_if_equations(ch.heff, ctx.cons, P, nt), ctx.cons);
      } catch (const SelectionFailure&) {
        // Degenerate selection: fall back to plain integer rounding (A = I).
        IfEquations eq;
        eq.a = IntMatrix::identity(ctx.n2k);
        eq.b = if_compute_B(ch.heff, eq.a, ctx.cons, P, nt);
        dec = if_decode(rv, eq, ctx.cons);
      }
      break;
    }
    case ReceiverKind::zero_forcing:
      dec = zf_decode(rv, ch.heff, ctx.cons);
      break;
    case ReceiverKind::mmse:
      dec = mmse_decode(rv, ch.heff, ctx.cons, P, ctx.prepared.design.nt);
      break;
    case ReceiverKind::ml: {
      const ComplexMatrix y = received_complex(rv, ctx.cfg.nr, ctx.prepared.design.T);
      dec = ml_decode(y, ch.h, ctx.codebook, P);
      break;
    }
  }

  std::uint32_t bit_errors = 0;
  for (std::size_t k = 0; k < ctx.n2k; ++k)
    bit_errors += std::popcount(static_cast<unsigned>(s[k]) ^ static_cast<unsigned>(dec.s_hat[k]));
  return bit_errors;
}

void run_batch(const SweepContext& ctx, double P, std::size_t point_index, std::uint64_t first,
               std::vector<std::uint32_t>& errs, unsigned workers) {
  const std::uint64_t count = errs.size();
  if (workers <= 1 || count < 2 * workers) {
    for (std::uint64_t i = 0; i < count; ++i)
      errs[i] = run_one_trial(ctx, P, point_index, first + i);
    return;
  }
  const std::uint64_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> fail(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = w * chunk;
    const std::uint64_t hi = std::min<std::uint64_t>(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, w, lo, hi]() {
      try {
        for (std::uint64_t i = lo; i < hi; ++i)
          errs[i] = run_one_trial(ctx, P, point_index, first + i);
      } catch (...) {
        fail[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : fail)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<BerRecord> run_ber_sweep(const SimConfig& cfg) {
  SweepContext ctx;
  ctx.cfg = cfg;
  ctx.cons = make_constellation(cfg.sqrt_m);
  const LinearDesign design = resolve_design(cfg.design);
  if (cfg.nr == 0) throw ConfigError("nr must be positive");
  if (2 * design.K > 2 * cfg.nr * design.T)
    throw ConfigError("decodability requires 2K <= 2*nr*T for this design");
  ctx.prepared = prepare_design(design, ctx.cons);
  ctx.n2k = 2 * design.K;
  ctx.bits_per_word = ctx.n2k * ctx.cons.bits_per_symbol;
  if (cfg.receiver == ReceiverKind::ml)
    ctx.codebook = build_ml_codebook(design, ctx.cons, ctx.prepared.gamma);

  unsigned workers = cfg.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());

  const std::vector<double> grid = snr_grid(cfg);
  std::vector<BerRecord> records;
  records.reserve(grid.size());

  if (cfg.max_trials == 0)
    std::cerr << "run_ber_sweep: max_trials is 0, producing empty records\n";

  constexpr std::uint64_t kBatch = 4096;  // fixed so results never depend on workers
  for (std::size_t pi = 0; pi < grid.size(); ++pi) {
    BerRecord rec;
    rec.snr_db = grid[pi];
    const double P = std::pow(10.0, grid[pi] / 10.0);
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<std::uint32_t> errs;
    while (rec.trials < cfg.max_trials &&
           (cfg.target_errors == 0 || rec.bit_errors < cfg.target_errors)) {
      const std::uint64_t n = std::min(kBatch, cfg.max_trials - rec.trials);
      errs.assign(n, 0);
      run_batch(ctx, P, pi, rec.trials, errs, workers);
      // Sequential scan keeps the stopping point exact.
      std::uint64_t used = n;
      for (std::uint64_t i = 0; i < n; ++i) {
        rec.bit_errors += errs[i];
        if (cfg.target_errors != 0 && rec.bit_errors >= cfg.target_errors) {
          used = i + 1;
          break;
        }
      }
      rec.trials += used;
    }

    rec.ber = rec.trials == 0
                  ? 0.0
                  : static_cast<double>(rec.bit_errors) /
                        (static_cast<double>(rec.trials) * static_cast<double>(ctx.bits_per_word));
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    records.push_back(rec);
  }
  return records;
}

// ---- bound curves -----------------------------------------------------------------

BoundCurve run_bound_eval(const SimConfig& cfg, const std::string& bound_name) {
  const LinearDesign design = resolve_design(cfg.design);
  const Constellation cons = make_constellation(cfg.sqrt_m);
  const std::vector<double> grid = snr_grid(cfg);

  BoundCurve curve;
  curve.label = bound_name;
  curve.snr_db = grid;
  curve.values.reserve(grid.size());

  const std::size_t K = design.K, nt = design.nt;
  if (bound_name == "theorem1") {
    const double sigma = nvs_sigma_min(design, 3, NvsMode::full);
    for (double db : grid) {
      const double P = std::pow(10.0, db / 10.0);
      curve.values.push_back(std::min(1.0, theorem1_avg_bound(P, K, nt, cfg.nr, sigma * sigma)));
    }
  } else if (bound_name == "vblast") {
    for (double db : grid) {
      const double P = std::pow(10.0, db / 10.0);
      curve.values.push_back(std::min(1.0, vblast_bound(P, nt, cfg.nr)));
    }
  } else if (bound_name == "lemma1") {
    const ChannelRealization ch = sample_channel(cfg.nr, nt, design, cons, cfg.seed);
    const double eps1_sq = lattice_min_dist_sq(ch.heff);
    for (double db : grid) {
      const double P = std::pow(10.0, db / 10.0);
      curve.values.push_back(std::min(1.0, lemma1_bound(P, K, nt, eps1_sq)));
    }
  } else if (bound_name == "chernoff") {
    const ChannelRealization ch = sample_channel(cfg.nr, nt, design, cons, cfg.seed);
    for (double db : grid) {
      const double P = std::pow(10.0, db / 10.0);
      const IfEquations eq = build_if_equations(ch.heff, cons, P, nt);
      double worst = 0.0;
      for (std::size_t m = 0; m < eq.b.rows(); ++m) {
        double b2 = 0.0;
        for (std::size_t t = 0; t < eq.b.cols(); ++t) b2 += eq.b(m, t) * eq.b(m, t);
        worst = std::max(worst, chernoff_layer_bound(P, nt, b2));
      }
      curve.values.push_back(std::min(1.0, worst));
    }
  } else {
    throw ConfigError("unknown bound: " + bound_name +
                      " (want theorem1|vblast|lemma1|chernoff)");
  }
  return curve;
}

NvsReport run_nvs_report(const std::string& design_spec, long long coeff_bound) {
  NvsReport rep;
  rep.design = design_spec;
  rep.coeff_bound = coeff_bound;
  const LinearDesign d = resolve_design(design_spec);
  rep.full = nvs_search(d, coeff_bound, NvsMode::full);
  rep.nonzero = nvs_search(d, coeff_bound, NvsMode::nonzero);
  rep.pass = rep.full.sigma_min > 1e-9;
  return rep;
}

// ---- formatting ----------------------------------------------------------------

std::string format_ber_csv(const std::vector<BerRecord>& records) {
  std::string out = "snr_db,trials,bit_errors,ber,wall_seconds\n";
  char line[160];
  for (const BerRecord& r : records) {
    std::snprintf(line, sizeof(line), "%.6g,%llu,%llu,%.10e,%.3f\n", r.snr_db,
                  static_cast<unsigned long long>(r.trials),
                  static_cast<unsigned long long>(r.bit_errors), r.ber, r.wall_seconds);
    out += line;
  }
  return out;
}

std::string format_bound_csv(const BoundCurve& curve) {
  std::string out = "snr_db,value,label\n";
  char line[160];
  for (std::size_t i = 0; i < curve.snr_db.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.6g,%.10e,%s\n", curve.snr_db[i], curve.values[i],
                  curve.label.c_str());
    out += line;
  }
  return out;
}

namespace {

std::string vec_to_string(const std::vector<long long>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(v[i]);
  }
  s += ']';
  return s;
}

}  // namespace

std::string format_nvs_report(const NvsReport& rep) {
  char buf[128];
  std::string out;
  out += "design: " + rep.design + "\n";
  out += "coeff bound: " + std::to_string(rep.coeff_bound) + "\n";
  std::snprintf(buf, sizeof(buf), "full mode:    sigma_min = %.10e at v = ", rep.full.sigma_min);
  out += buf;
  out += vec_to_string(rep.full.minimizer) + "\n";
  std::snprintf(buf, sizeof(buf), "nonzero mode: sigma_min = %.10e at v = ",
                rep.nonzero.sigma_min);
  out += buf;
  out += vec_to_string(rep.nonzero.minimizer) + "\n";
  out += std::string("verdict: ") + (rep.pass ? "PASS" : "FAIL") +
         " (certificate limited to the searched box |v_k| <= " +
         std::to_string(rep.coeff_bound) + ")\n";
  return out;
}

}  // namespace ifstbc
