#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "prsg/arithmetization.hpp"
#include "prsg/config.hpp"
#include "prsg/fault_injection.hpp"
#include "prsg/linear_code_guard.hpp"
#include "prsg/rns.hpp"

namespace prsg::cli {

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options shared by the generator-driven subcommands; every one of them
// overrides the matching --config entry when given.
struct GeneratorOptions {
  std::string config_path;
  std::string poly;
  std::string seed;
  std::string mode;
  std::string moduli;
  std::string selectors;
  std::string policy;
  unsigned threshold = 3;
  std::vector<std::string> faults;

  CLI::Option* threshold_opt = nullptr;

  void add_to(CLI::App* app, bool with_mode) {
    app->add_option("--config", config_path, "Config file ([generator], [rns], [faults] sections)");
    app->add_option("--poly", poly, "Forming polynomial as degree:taps, e.g. 4:1 for x^4 + x + 1");
    app->add_option("--seed", seed, "Initial register, leftmost bit is x_p (emitted first)");
    if (with_mode) app->add_option("--mode", mode, "serial | block | parity | rns");
    app->add_option("--moduli", moduli, "RNS bases info,...:redundant,... or auto:<k>");
    app->add_option("--selectors", selectors, "Parity-mode check selectors, comma separated bit strings");
    app->add_option("--policy", policy, "RNS fault policy: correct | detect-only");
    threshold_opt = app->add_option("--threshold", threshold,
                                    "Consecutive corrections on one channel before it is excluded");
    app->add_option("--fault", faults, "Fault such as feedback@1 or channel[0]@2:add=1:permanent (repeatable)");
  }

  RunConfig build() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!poly.empty()) cfg.poly = parse_polynomial(poly);
    if (!seed.empty()) cfg.seed = parse_bits(seed);
    if (!mode.empty()) cfg.mode = parse_mode(mode);
    if (!moduli.empty()) cfg.moduli = moduli;
    if (!selectors.empty()) cfg.selectors = parse_selectors(selectors);
    if (!policy.empty()) cfg.policy = parse_policy(policy);
    if (threshold_opt && threshold_opt->count() > 0) cfg.threshold = threshold;
    for (const auto& f : faults) cfg.faults.push_back(parse_fault(f));
    return cfg;
  }
};

std::string block_status(const BlockEvent& ev) {
  std::string s = to_string(ev.status);
  if (ev.status == BlockStatus::corrected && ev.channel) s += "(" + std::to_string(*ev.channel) + ")";
  if (ev.excluded_modulus) s += " excluded(" + std::to_string(*ev.excluded_modulus) + ")";
  return s;
}

bool uncorrectable(const SimulationResult& sim) {
  for (const auto& ev : sim.blocks)
    if (ev.status == BlockStatus::detected || ev.status == BlockStatus::ambiguous) return true;
  return sim.halted;
}

int cmd_generate(const GeneratorOptions& opts, std::size_t n, bool n_given, bool hex, const std::string& dump_path,
                 std::ostream& out) {
  RunConfig cfg = opts.build();
  if (n_given) cfg.length = n;
  if (hex) cfg.format = OutputFormat::hex;
  const auto gen = resolve(cfg);

  if (!dump_path.empty()) {
    std::ofstream f(dump_path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + dump_path + "'");
    f << dump_config(cfg);
  }

  const auto sim = simulate(gen, cfg.faults, cfg.length);
  const auto text = cfg.format == OutputFormat::hex ? format_hex(sim.stream) : format_bits(sim.stream);
  if (!text.empty()) out << text << '\n';
  return uncorrectable(sim) ? kExitUncorrectable : kExitOk;
}

int cmd_protect(const GeneratorOptions& opts, std::size_t blocks, std::ostream& out) {
  RunConfig cfg = opts.build();
  cfg.mode = Mode::rns;
  const auto gen = resolve(cfg);
  const auto tau = static_cast<std::size_t>(gen.poly.degree());
  const auto sim = simulate(gen, cfg.faults, (blocks + 1) * tau);
  for (std::size_t q = 1; q < sim.blocks.size(); ++q) {
    const auto& ev = sim.blocks[q];
    out << (ev.block ? ev.block->to_string() : std::string(tau, '-')) << ' ' << block_status(ev) << '\n';
  }
  return uncorrectable(sim) ? kExitUncorrectable : kExitOk;
}

void print_rows(std::ostream& out, const BitMatrix& m, std::size_t first_row, const std::string& label) {
  for (std::size_t r = first_row; r < m.rows(); ++r) {
    out << label << (r - first_row) << "] =";
    for (std::size_t c = 0; c < m.cols(); ++c) out << ' ' << (m.get(r, c) ? '1' : '0');
    out << '\n';
  }
}

int cmd_matrix(const GeneratorOptions& opts, std::uint64_t span, bool span_given, bool show_lnp, std::ostream& out) {
  RunConfig cfg = opts.build();
  if (!cfg.poly) throw ConfigError("no polynomial given");
  const auto& poly = *cfg.poly;
  const auto tau = static_cast<std::size_t>(poly.degree());
  const auto info = block_matrix(poly, span_given ? span : tau);

  out << "D(x) = " << poly.to_polynomial_string() << ", span " << (span_given ? span : tau) << '\n';
  out << "G_Inf (row i: x[q,i] as XOR of x[q-1,0..." << tau - 1 << "])\n";
  print_rows(out, info, 0, "x[q,");

  const auto selectors = cfg.selectors.empty() ? std::vector<Bits>{parity_selector(tau)} : cfg.selectors;
  const auto spec = derive_check_rows(info, selectors);
  const auto gen = generator_matrix(info, spec);
  out << "G_Gen check rows (selector j:";
  for (const auto& v : spec.selectors) out << ' ' << format_bits(v);
  out << ")\n";
  print_rows(out, gen, tau, "x*[q,");

  if (show_lnp) {
    const auto lnp = pack_system(info);
    out << "LNP coefficients h[j] (input x[q-1,j]):";
    for (const auto& h : lnp.coefficients()) out << ' ' << h;
    out << "\nfield offsets (slot k holds x[q," << tau - 1 << "-k]):";
    for (auto o : lnp.offsets()) out << ' ' << o;
    out << "\nfield widths:";
    for (auto w : lnp.widths()) out << ' ' << w;
    out << "\ntotal width: " << lnp.total_width() << '\n';
    if (cfg.moduli) {
      const auto moduli = parse_moduli(*cfg.moduli, lnp.total_width());
      out << "moduli: " << moduli.to_string() << "  M_n = " << moduli.operating_range()
          << "  full = " << moduli.full_range() << '\n';
    }
  }
  return kExitOk;
}

std::vector<TargetKind> parse_targets(const std::string& text) {
  std::vector<TargetKind> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "reg") out.push_back(TargetKind::register_bit);
    else if (item == "feedback") out.push_back(TargetKind::feedback_bit);
    else if (item == "block") out.push_back(TargetKind::block_bit);
    else if (item == "check") out.push_back(TargetKind::check_symbol);
    else if (item == "channel") out.push_back(TargetKind::residue_channel);
    else throw ConfigError("unknown fault target '" + item + "' (reg, feedback, block, check, channel)");
  }
  return out;
}

struct InjectOptions {
  std::size_t trials = 1000;
  std::uint64_t rng_seed = 1;
  std::size_t length = 64;
  std::string targets;
  std::string model = "invert";
  bool permanent = false;
  std::size_t faults_per_trial = 1;
  bool fixed_state = false;
  unsigned threads = 0;
  std::string out_path;
};

int cmd_inject(const GeneratorOptions& opts, const InjectOptions& io, std::ostream& out) {
  RunConfig cfg = opts.build();
  if (!cfg.seed && cfg.poly) {
    // Placeholder register; each trial draws its own unless --fixed-state.
    cfg.seed = Bits(static_cast<std::size_t>(cfg.poly->degree()), 0);
    cfg.seed->front() = 1;
  }
  const auto gen = resolve(cfg);

  DetectionReport report;
  if (!cfg.faults.empty()) {
    report = run_schedules(gen, {cfg.faults}, io.length, io.threads);
  } else {
    CampaignConfig campaign{gen, {}, io.trials, io.rng_seed, io.length, !io.fixed_state, io.threads};
    if (io.targets.empty()) {
      switch (gen.mode) {
        case Mode::serial: campaign.faults.targets = {TargetKind::register_bit, TargetKind::feedback_bit}; break;
        case Mode::block: campaign.faults.targets = {TargetKind::block_bit}; break;
        case Mode::parity: campaign.faults.targets = {TargetKind::block_bit, TargetKind::check_symbol}; break;
        case Mode::rns: campaign.faults.targets = {TargetKind::residue_channel}; break;
      }
    } else {
      campaign.faults.targets = parse_targets(io.targets);
    }
    if (io.model == "invert") campaign.faults.model = ModelKind::invert;
    else if (io.model == "stuck") campaign.faults.model = ModelKind::stuck_at;
    else if (io.model == "add") campaign.faults.model = ModelKind::additive;
    else throw ConfigError("unknown fault model '" + io.model + "' (invert, stuck, add)");
    campaign.faults.persistence = io.permanent ? Persistence::permanent : Persistence::transient;
    campaign.faults.faults_per_trial = io.faults_per_trial;
    report = run_campaign(campaign);
  }

  const auto json = report_to_json(report);
  if (io.out_path.empty() || io.out_path == "-") {
    out << json << '\n';
  } else {
    std::ofstream f(io.out_path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + io.out_path + "'");
    f << json << '\n';
  }
  return kExitOk;
}

int cmd_report(const std::string& in_path, bool as_json, std::ostream& out) {
  std::ostringstream buf;
  if (in_path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream f(in_path, std::ios::binary);
    if (!f) throw ConfigError("cannot read '" + in_path + "'");
    buf << f.rdbuf();
  }
  const auto report = report_from_json(buf.str());
  if (as_json) {
    out << report_to_json(report) << '\n';
    return kExitOk;
  }

  auto pct = [&](std::size_t k) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << (report.trials ? 100.0 * static_cast<double>(k) / static_cast<double>(report.trials) : 0.0) << '%';
    return os.str();
  };
  const std::size_t active = report.trials - report.masked;
  std::size_t realigned = 0, degraded = 0;
  for (const auto& t : report.per_trial) {
    realigned += t.realign_lag.has_value();
    degraded += !t.excluded_moduli.empty();
  }
  out << "trials     " << report.trials << '\n'
      << "masked     " << report.masked << " (" << pct(report.masked) << ")\n"
      << "missed     " << report.missed << " (" << pct(report.missed) << ")\n"
      << "detected   " << report.detected << " (" << pct(report.detected) << ")\n"
      << "corrected  " << report.corrected << " (" << pct(report.corrected) << ")\n"
      << "ambiguous  " << report.ambiguous << " (" << pct(report.ambiguous) << ")\n"
      << "effective faults " << active << ", flagged "
      << (report.detected + report.corrected + report.ambiguous) << '\n'
      << "replayed segments (realign lag found) " << realigned << '\n'
      << "degraded (channel excluded) " << degraded << '\n';
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fault-protected pseudo-random binary sequence generators"};
  app.require_subcommand(1);
  app.footer("Seeds are written x_p first: --seed 1010 means x_p=1, x_{p+1}=0, x_{p+2}=1, x_{p+3}=0.\n"
             "Exit codes: 0 success, 1 detected uncorrectable fault, 2 configuration error.");

  GeneratorOptions gen_opts, protect_opts, matrix_opts, inject_opts;

  auto* generate = app.add_subcommand("generate", "Write the keystream");
  gen_opts.add_to(generate, true);
  std::size_t n = 0;
  bool hex = false;
  std::string dump_path;
  auto* n_opt = generate->add_option("--n,--length", n, "Number of bits");
  generate->add_flag("--hex", hex, "Hex output, first bit in the MSB of the first byte");
  generate->add_option("--dump-config", dump_path, "Also write the effective config to this file");

  auto* protect = app.add_subcommand("protect", "Run the RNS pipeline and print each block with its status");
  protect_opts.add_to(protect, false);
  std::size_t blocks = 1;
  protect->add_option("--blocks", blocks, "Number of blocks after the seed");

  auto* matrix = app.add_subcommand("matrix", "Print G_Inf and G_Gen");
  matrix_opts.add_to(matrix, false);
  std::uint64_t span = 0;
  bool show_lnp = false;
  auto* span_opt = matrix->add_option("--span", span, "Steps per block (default: degree)")->check(CLI::PositiveNumber);
  matrix->add_flag("--lnp", show_lnp, "Also print the packed LNP layout");

  auto* inject = app.add_subcommand("inject", "Run a fault-injection campaign and write a JSON report");
  inject_opts.add_to(inject, true);
  InjectOptions io;
  inject->add_option("--trials", io.trials, "Number of trials");
  inject->add_option("--rng-seed", io.rng_seed, "Campaign PRNG seed");
  inject->add_option("--length", io.length, "Output bits per trial");
  inject->add_option("--targets", io.targets, "Comma list of reg, feedback, block, check, channel");
  inject->add_option("--model", io.model, "invert | stuck | add");
  inject->add_flag("--permanent", io.permanent, "Faults persist from their time on");
  inject->add_option("--faults-per-trial", io.faults_per_trial, "Faults drawn per trial");
  inject->add_flag("--fixed-state", io.fixed_state, "Use --seed for every trial instead of a random register");
  inject->add_option("--threads", io.threads, "Worker threads (default: PRSG_THREADS or all cores)");
  inject->add_option("--out", io.out_path, "Report file (default: stdout)");

  auto* report = app.add_subcommand("report", "Render a DetectionReport");
  std::string in_path;
  bool as_json = false;
  report->add_option("--in", in_path, "Report JSON file, - for stdin")->required();
  report->add_flag("--json", as_json, "Re-emit normalized JSON instead of a summary");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen_opts, n, n_opt->count() > 0, hex, dump_path, out);
    if (protect->parsed()) return cmd_protect(protect_opts, blocks, out);
    if (matrix->parsed()) return cmd_matrix(matrix_opts, span, span_opt->count() > 0, show_lnp, out);
    if (inject->parsed()) return cmd_inject(inject_opts, io, out);
    if (report->parsed()) return cmd_report(in_path, as_json, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace prsg::cli
