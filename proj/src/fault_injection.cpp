#include "prsg/fault_injection.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace prsg {

namespace {

std::uint64_t parse_u64(std::string_view s, std::string_view context) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("malformed number in fault '" + std::string(context) + "'");
  }
  return v;
}

struct TargetName {
  TargetKind kind;
  std::string_view name;
  bool indexed;
};

constexpr TargetName kTargets[] = {
    {TargetKind::register_bit, "reg", true},
    {TargetKind::feedback_bit, "feedback", false},
    {TargetKind::block_bit, "block", true},
    {TargetKind::check_symbol, "check", true},
    {TargetKind::residue_channel, "channel", true},
};

const TargetName& target_name(TargetKind kind) {
  for (const auto& t : kTargets)
    if (t.kind == kind) return t;
  throw std::logic_error("unknown fault target");
}

std::uint8_t flip(std::uint8_t b) { return static_cast<std::uint8_t>((b & 1u) ^ 1u); }

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::serial: return "serial";
    case Mode::block: return "block";
    case Mode::parity: return "parity";
    case Mode::rns: return "rns";
  }
  return "unknown";
}

Mode parse_mode(std::string_view text) {
  for (auto m : {Mode::serial, Mode::block, Mode::parity, Mode::rns})
    if (to_string(m) == text) return m;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "' (serial, block, parity, rns)");
}

FaultSpec parse_fault(std::string_view text) {
  FaultSpec f;
  const auto at = text.find('@');
  if (at == std::string_view::npos) {
    throw std::invalid_argument("fault '" + std::string(text) + "' lacks '@time'");
  }
  std::string_view target = text.substr(0, at);
  std::string_view rest = text.substr(at + 1);

  std::optional<std::uint64_t> index;
  if (const auto lb = target.find('['); lb != std::string_view::npos) {
    if (target.back() != ']') throw std::invalid_argument("fault '" + std::string(text) + "': unclosed '['");
    index = parse_u64(target.substr(lb + 1, target.size() - lb - 2), text);
    target = target.substr(0, lb);
  }
  const TargetName* name = nullptr;
  for (const auto& t : kTargets)
    if (t.name == target) name = &t;
  if (!name) throw std::invalid_argument("fault '" + std::string(text) + "': unknown target");
  if (name->indexed != index.has_value()) {
    throw std::invalid_argument("fault '" + std::string(text) + "': target " +
                                (name->indexed ? "needs" : "takes no") + " [index]");
  }
  f.target = FaultTarget{name->kind, static_cast<std::size_t>(index.value_or(0))};

  auto next_field = [&rest]() {
    const auto colon = rest.find(':');
    auto field = rest.substr(0, colon);
    rest = colon == std::string_view::npos ? std::string_view{} : rest.substr(colon + 1);
    return field;
  };
  f.time = parse_u64(next_field(), text);
  while (!rest.empty()) {
    const auto field = next_field();
    if (field == "permanent") {
      f.persistence = Persistence::permanent;
    } else if (field == "transient") {
      f.persistence = Persistence::transient;
    } else if (field == "invert") {
      f.model = {ModelKind::invert, 0};
    } else if (field == "stuck0" || field == "stuck1") {
      f.model = {ModelKind::stuck_at, static_cast<std::uint64_t>(field.back() - '0')};
    } else if (field.starts_with("add=")) {
      f.model = {ModelKind::additive, parse_u64(field.substr(4), text)};
      if (f.model.value == 0) throw std::invalid_argument("fault '" + std::string(text) + "': add=0 changes nothing");
    } else {
      throw std::invalid_argument("fault '" + std::string(text) + "': unknown field '" + std::string(field) + "'");
    }
  }
  return f;
}

std::string format_fault(const FaultSpec& fault) {
  const auto& name = target_name(fault.target.kind);
  std::string s(name.name);
  if (name.indexed) s += "[" + std::to_string(fault.target.index) + "]";
  s += "@" + std::to_string(fault.time);
  switch (fault.model.kind) {
    case ModelKind::invert: break;
    case ModelKind::stuck_at: s += fault.model.value & 1u ? ":stuck1" : ":stuck0"; break;
    case ModelKind::additive: s += ":add=" + std::to_string(fault.model.value); break;
  }
  if (fault.persistence == Persistence::permanent) s += ":permanent";
  return s;
}

std::uint8_t apply_fault(std::uint8_t bit, const FaultModel& model) {
  switch (model.kind) {
    case ModelKind::invert: return flip(bit);
    case ModelKind::stuck_at: return static_cast<std::uint8_t>(model.value & 1u);
    case ModelKind::additive: return static_cast<std::uint8_t>((bit ^ model.value) & 1u);
  }
  return bit;
}

std::uint64_t apply_fault(std::uint64_t residue, std::uint64_t modulus, const FaultModel& model) {
  switch (model.kind) {
    case ModelKind::invert: return (residue ^ 1u) % modulus;
    case ModelKind::stuck_at: return (model.value & 1u) % modulus;
    case ModelKind::additive: return (residue % modulus + model.value % modulus) % modulus;
  }
  return residue;
}

void inject(LfsrState& state, const FaultSpec& fault) {
  if (fault.target.kind != TargetKind::register_bit || fault.target.index >= state.reg.size()) {
    throw std::invalid_argument("fault target out of range for the serial register");
  }
  auto& bit = state.reg[fault.target.index];
  bit = apply_fault(bit, fault.model);
}

void inject(PrsBlock& block, const FaultSpec& fault) {
  if (fault.target.kind != TargetKind::block_bit || fault.target.index >= block.bits.size()) {
    throw std::invalid_argument("fault target out of range for the block");
  }
  auto& bit = block.bits[fault.target.index];
  bit = apply_fault(bit, fault.model);
}

void inject(GuardedBlock& guarded, const FaultSpec& fault) {
  if (fault.target.kind == TargetKind::block_bit) {
    inject(guarded.block, fault);
    return;
  }
  if (fault.target.kind != TargetKind::check_symbol || fault.target.index >= guarded.checks.size()) {
    throw std::invalid_argument("fault target out of range for the guarded block");
  }
  auto& bit = guarded.checks[fault.target.index];
  bit = apply_fault(bit, fault.model);
}

void inject(ResidueVector& values, std::span<const std::uint64_t> moduli, const FaultSpec& fault) {
  if (fault.target.kind != TargetKind::residue_channel || fault.target.index >= values.size() ||
      values.size() != moduli.size()) {
    throw std::invalid_argument("fault target out of range for the residue channels");
  }
  auto& v = values[fault.target.index];
  v = apply_fault(v, moduli[fault.target.index], fault.model);
}

StepResult faulty_step(const TapPolynomial& poly, const LfsrState& state, std::span<const FaultSpec> faults) {
  LfsrState s = state;
  for (const auto& f : faults) {
    if (f.target.kind == TargetKind::register_bit && f.active_at(s.step_index)) inject(s, f);
  }
  std::uint8_t fb = feedback_bit(poly, s.reg);
  for (const auto& f : faults) {
    if (f.target.kind == TargetKind::feedback_bit && f.active_at(s.step_index)) fb = apply_fault(fb, f.model);
  }
  StepResult r;
  r.output = s.reg.front();
  r.state.reg.assign(s.reg.begin() + 1, s.reg.end());
  r.state.reg.push_back(fb);
  r.state.step_index = s.step_index + 1;
  return r;
}

void validate(const GeneratorConfig& config) {
  if (config.seed.size() != static_cast<std::size_t>(config.poly.degree())) {
    throw std::invalid_argument("seed has " + std::to_string(config.seed.size()) + " bits, polynomial degree is " +
                                std::to_string(config.poly.degree()));
  }
  if ((config.mode == Mode::rns) != config.moduli.has_value()) {
    throw std::invalid_argument(config.mode == Mode::rns ? "rns mode needs moduli"
                                                         : "moduli are only meaningful in rns mode");
  }
  if (config.mode != Mode::parity && !config.selectors.empty()) {
    throw std::invalid_argument("check selectors are only meaningful in parity mode");
  }
  if (config.threshold < 1) throw std::invalid_argument("threshold must be at least 1");
  if (!config.selectors.empty()) derive_check_rows(block_matrix(config.poly), config.selectors);
}

void validate(const FaultSpec& fault, const GeneratorConfig& config) {
  const auto tau = static_cast<std::size_t>(config.poly.degree());
  auto require = [&](bool applicable, std::size_t limit) {
    if (!applicable) {
      throw std::invalid_argument("fault " + format_fault(fault) + " does not apply in " + to_string(config.mode) +
                                  " mode");
    }
    if (fault.target.index >= limit) {
      throw std::invalid_argument("fault " + format_fault(fault) + ": target out of range");
    }
  };
  switch (fault.target.kind) {
    case TargetKind::register_bit: require(config.mode == Mode::serial, tau); break;
    case TargetKind::feedback_bit: require(config.mode == Mode::serial, 1); break;
    case TargetKind::block_bit: require(config.mode != Mode::serial, tau); break;
    case TargetKind::check_symbol:
      require(config.mode == Mode::parity, config.selectors.empty() ? 1 : config.selectors.size());
      break;
    case TargetKind::residue_channel:
      require(config.mode == Mode::rns, config.moduli ? config.moduli->size() : 0);
      break;
  }
}

namespace {

void apply_block_faults(PrsBlock& block, std::span<const FaultSpec> faults) {
  for (const auto& f : faults)
    if (f.target.kind == TargetKind::block_bit && f.active_at(block.index)) inject(block, f);
}

BlockEvent seed_event(const PrsBlock& block) {
  BlockEvent ev;
  ev.index = block.index;
  ev.block = block;
  return ev;
}

void emit(SimulationResult& out, const PrsBlock& block, std::size_t n) {
  for (auto b : block.bits) {
    if (out.stream.size() == n) break;
    out.stream.push_back(b);
  }
}

SimulationResult simulate_serial(const GeneratorConfig& config, std::span<const FaultSpec> faults, std::size_t n) {
  SimulationResult out;
  out.stream.reserve(n);
  LfsrState state{config.seed, 0};
  for (std::size_t p = 0; p < n; ++p) {
    auto r = faulty_step(config.poly, state, faults);
    out.stream.push_back(r.output);
    state = std::move(r.state);
  }
  return out;
}

SimulationResult simulate_blocks(const GeneratorConfig& config, std::span<const FaultSpec> faults, std::size_t n) {
  SimulationResult out;
  const auto info = block_matrix(config.poly);
  std::optional<CheckSpec> spec;
  if (config.mode == Mode::parity) {
    spec = derive_check_rows(info, config.selectors.empty() ? std::vector<Bits>{parity_selector(info.rows())}
                                                            : config.selectors);
  }

  PrsBlock block = seed_block(LfsrState{config.seed, 0});
  apply_block_faults(block, faults);
  out.blocks.push_back(seed_event(block));
  emit(out, block, n);

  while (out.stream.size() < n) {
    BlockEvent ev;
    if (spec) {
      auto guarded = encode_block(info, *spec, block);
      for (const auto& f : faults) {
        if (f.active_at(guarded.block.index) &&
            (f.target.kind == TargetKind::block_bit || f.target.kind == TargetKind::check_symbol)) {
          inject(guarded, f);
        }
      }
      ev.syndrome = verify_block(*spec, guarded);
      ev.checks = guarded.checks;
      if (!syndrome_clear(ev.syndrome)) ev.status = BlockStatus::detected;
      block = std::move(guarded.block);
    } else {
      block = block_step(info, block);
      apply_block_faults(block, faults);
    }
    ev.index = block.index;
    ev.block = block;
    out.blocks.push_back(std::move(ev));
    emit(out, block, n);
  }
  return out;
}

SimulationResult simulate_rns(const GeneratorConfig& config, std::span<const FaultSpec> faults, std::size_t n) {
  SimulationResult out;
  ProtectedGenerator gen(pack_system(block_matrix(config.poly)), *config.moduli, config.threshold, config.policy);

  PrsBlock block = seed_block(LfsrState{config.seed, 0});
  apply_block_faults(block, faults);
  out.blocks.push_back(seed_event(block));
  emit(out, block, n);

  while (out.stream.size() < n) {
    const std::uint64_t q = block.index + 1;
    const auto ctx = gen.context();
    auto hook = [&](ResidueVector& values, std::span<const std::size_t> physical) {
      for (const auto& f : faults) {
        if (f.target.kind != TargetKind::residue_channel || !f.active_at(q)) continue;
        const auto it = std::find(physical.begin(), physical.end(), f.target.index);
        if (it == physical.end()) continue;  // channel already excluded
        FaultSpec local = f;
        local.target.index = static_cast<std::size_t>(it - physical.begin());
        inject(values, ctx->moduli.all(), local);
      }
    };
    auto st = gen.step(block, hook);

    BlockEvent ev;
    ev.index = q;
    ev.status = st.result.status;
    ev.channel = st.physical_channel;
    ev.excluded_modulus = st.excluded_modulus;
    if (st.excluded_modulus) out.excluded_moduli.push_back(*st.excluded_modulus);
    if (!st.result.block) {
      out.blocks.push_back(std::move(ev));
      out.halted = true;
      break;
    }
    block = std::move(*st.result.block);
    apply_block_faults(block, faults);
    ev.block = block;
    out.blocks.push_back(std::move(ev));
    emit(out, block, n);
  }
  return out;
}

}  // namespace

SimulationResult simulate(const GeneratorConfig& config, std::span<const FaultSpec> faults, std::size_t n) {
  validate(config);
  for (const auto& f : faults) validate(f, config);
  switch (config.mode) {
    case Mode::serial: return simulate_serial(config, faults, n);
    case Mode::block:
    case Mode::parity: return simulate_blocks(config, faults, n);
    case Mode::rns: return simulate_rns(config, faults, n);
  }
  throw std::logic_error("unknown mode");
}

Divergence analyze_divergence(std::span<const std::uint8_t> correct, std::span<const std::uint8_t> faulty,
                              std::size_t max_lag, std::size_t min_overlap) {
  if (correct.size() != faulty.size()) throw std::invalid_argument("analyze_divergence: length mismatch");
  Divergence d;
  const auto n = correct.size();
  std::size_t first = 0;
  while (first < n && (correct[first] & 1u) == (faulty[first] & 1u)) ++first;
  if (first == n) return d;
  d.first_divergence = first;

  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    const std::size_t start = std::max(first, lag);
    if (start >= n || n - start < min_overlap) break;
    bool aligned = true;
    for (std::size_t i = start; i < n && aligned; ++i) aligned = (faulty[i] & 1u) == (correct[i - lag] & 1u);
    if (aligned) {
      d.realign_lag = lag;
      break;
    }
  }
  return d;
}

Divergence analyze_divergence(std::span<const std::uint8_t> correct, std::span<const std::uint8_t> faulty,
                              int degree) {
  const auto tau = static_cast<std::size_t>(degree);
  return analyze_divergence(correct, faulty, 4 * tau, 2 * tau);
}

std::string to_string(TrialStatus status) {
  switch (status) {
    case TrialStatus::masked: return "masked";
    case TrialStatus::missed: return "missed";
    case TrialStatus::detected: return "detected";
    case TrialStatus::corrected: return "corrected";
    case TrialStatus::ambiguous: return "ambiguous";
  }
  return "unknown";
}

TrialStatus parse_trial_status(std::string_view text) {
  for (auto s : {TrialStatus::masked, TrialStatus::missed, TrialStatus::detected, TrialStatus::corrected,
                 TrialStatus::ambiguous}) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument("unknown trial status '" + std::string(text) + "'");
}

TrialStatus classify(const SimulationResult& shadow, const SimulationResult& faulty) {
  bool detected = false, ambiguous = false, corrected = false;
  for (const auto& ev : faulty.blocks) {
    detected |= ev.status == BlockStatus::detected;
    ambiguous |= ev.status == BlockStatus::ambiguous;
    corrected |= ev.status == BlockStatus::corrected;
  }
  if (ambiguous) return TrialStatus::ambiguous;
  if (detected) return TrialStatus::detected;
  const bool same = !faulty.halted && shadow.stream == faulty.stream;
  if (corrected) return same ? TrialStatus::corrected : TrialStatus::missed;
  return same ? TrialStatus::masked : TrialStatus::missed;
}

unsigned campaign_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PRSG_THREADS")) {
    unsigned v = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size() && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Trial {
  GeneratorConfig config;
  std::vector<FaultSpec> faults;
};

TrialRecord run_trial(const Trial& trial, std::size_t length) {
  const auto shadow = simulate(trial.config, {}, length);
  const auto faulty = simulate(trial.config, trial.faults, length);
  TrialRecord rec;
  rec.status = classify(shadow, faulty);
  rec.faults = trial.faults;
  rec.excluded_moduli = faulty.excluded_moduli;
  const auto common = std::min(shadow.stream.size(), faulty.stream.size());
  const auto d = analyze_divergence(std::span(shadow.stream).first(common), std::span(faulty.stream).first(common),
                                    trial.config.poly.degree());
  rec.first_divergence = d.first_divergence;
  rec.realign_lag = d.realign_lag;
  if (!rec.first_divergence && faulty.stream.size() < shadow.stream.size()) rec.first_divergence = common;
  return rec;
}

template <typename MakeTrial>
DetectionReport run_trials(std::size_t count, std::size_t length, unsigned threads, MakeTrial make_trial) {
  DetectionReport report;
  report.trials = count;
  report.per_trial.resize(count);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (std::size_t i = next++; i < count && !failed; i = next++) {
      try {
        report.per_trial[i] = run_trial(make_trial(i), length);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(campaign_threads(threads), static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  for (const auto& rec : report.per_trial) {
    switch (rec.status) {
      case TrialStatus::masked: ++report.masked; break;
      case TrialStatus::missed: ++report.missed; break;
      case TrialStatus::detected: ++report.detected; break;
      case TrialStatus::corrected: ++report.corrected; break;
      case TrialStatus::ambiguous: ++report.ambiguous; break;
    }
  }
  return report;
}

std::size_t target_range(TargetKind kind, const GeneratorConfig& config) {
  switch (kind) {
    case TargetKind::register_bit:
    case TargetKind::block_bit: return static_cast<std::size_t>(config.poly.degree());
    case TargetKind::feedback_bit: return 1;
    case TargetKind::check_symbol: return config.selectors.empty() ? 1 : config.selectors.size();
    case TargetKind::residue_channel: return config.moduli ? config.moduli->size() : 0;
  }
  return 0;
}

}  // namespace

DetectionReport run_schedules(const GeneratorConfig& config, const std::vector<std::vector<FaultSpec>>& schedules,
                              std::size_t length, unsigned threads) {
  validate(config);
  for (const auto& s : schedules)
    for (const auto& f : s) validate(f, config);
  return run_trials(schedules.size(), length, threads,
                    [&](std::size_t i) { return Trial{config, schedules[i]}; });
}

DetectionReport run_campaign(const CampaignConfig& config) {
  validate(config.generator);
  const auto& dist = config.faults;
  if (dist.targets.empty() && dist.faults_per_trial > 0) throw std::invalid_argument("campaign has no fault targets");
  const auto tau = static_cast<std::size_t>(config.generator.poly.degree());
  const bool serial = config.generator.mode == Mode::serial;
  const std::size_t blocks = (config.length + tau - 1) / tau;
  if (serial ? config.length < 1 : blocks < 2) {
    throw std::invalid_argument("campaign length too short to place a fault");
  }
  for (auto kind : dist.targets) {
    validate(FaultSpec{FaultTarget{kind, 0}, FaultModel{dist.model, 0}, 0, dist.persistence}, config.generator);
  }

  auto make_trial = [&](std::size_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(std::uint64_t{i} >> 32)};
    std::mt19937_64 rng(seq);
    auto uniform = [&rng](std::uint64_t lo, std::uint64_t hi) {
      return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
    };

    Trial trial{config.generator, {}};
    if (config.random_state) {
      do {
        for (auto& b : trial.config.seed) b = static_cast<std::uint8_t>(uniform(0, 1));
      } while (std::all_of(trial.config.seed.begin(), trial.config.seed.end(), [](auto b) { return b == 0; }));
    }
    for (std::size_t k = 0; k < dist.faults_per_trial; ++k) {
      FaultSpec f;
      f.target.kind = dist.targets[uniform(0, dist.targets.size() - 1)];
      f.target.index = uniform(0, target_range(f.target.kind, trial.config) - 1);
      f.time = serial ? uniform(0, config.length - 1) : uniform(1, blocks - 1);
      f.persistence = dist.persistence;
      f.model.kind = dist.model;
      if (dist.model == ModelKind::stuck_at) {
        f.model.value = uniform(0, 1);
      } else if (dist.model == ModelKind::additive) {
        const std::uint64_t m =
            f.target.kind == TargetKind::residue_channel ? trial.config.moduli->modulus(f.target.index) : 2;
        f.model.value = uniform(1, m - 1);
      }
      trial.faults.push_back(f);
    }
    return trial;
  };
  return run_trials(config.trials, config.length, config.threads, make_trial);
}

std::string report_to_json(const DetectionReport& report, int indent) {
  using nlohmann::json;
  json j;
  j["trials"] = report.trials;
  j["masked"] = report.masked;
  j["missed"] = report.missed;
  j["detected"] = report.detected;
  j["corrected"] = report.corrected;
  j["ambiguous"] = report.ambiguous;
  j["per_trial"] = json::array();
  for (const auto& rec : report.per_trial) {
    json t;
    t["first_divergence"] = rec.first_divergence ? json(*rec.first_divergence) : json(nullptr);
    t["realign_lag"] = rec.realign_lag ? json(*rec.realign_lag) : json(nullptr);
    t["status"] = to_string(rec.status);
    t["excluded_moduli"] = rec.excluded_moduli;
    json faults = json::array();
    for (const auto& f : rec.faults) faults.push_back(format_fault(f));
    t["faults"] = std::move(faults);
    j["per_trial"].push_back(std::move(t));
  }
  return j.dump(indent);
}

DetectionReport report_from_json(std::string_view text) {
  using nlohmann::json;
  DetectionReport r;
  try {
    const auto j = json::parse(text);
    r.trials = j.at("trials").get<std::size_t>();
    r.masked = j.at("masked").get<std::size_t>();
    r.missed = j.at("missed").get<std::size_t>();
    r.detected = j.at("detected").get<std::size_t>();
    r.corrected = j.at("corrected").get<std::size_t>();
    r.ambiguous = j.at("ambiguous").get<std::size_t>();
    for (const auto& t : j.at("per_trial")) {
      TrialRecord rec;
      if (!t.at("first_divergence").is_null()) rec.first_divergence = t.at("first_divergence").get<std::size_t>();
      if (!t.at("realign_lag").is_null()) rec.realign_lag = t.at("realign_lag").get<std::size_t>();
      rec.status = parse_trial_status(t.at("status").get<std::string>());
      if (t.contains("excluded_moduli")) rec.excluded_moduli = t["excluded_moduli"].get<std::vector<std::uint64_t>>();
      if (t.contains("faults")) {
        for (const auto& f : t["faults"]) rec.faults.push_back(parse_fault(f.get<std::string>()));
      }
      r.per_trial.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
  return r;
}

}  // namespace prsg
