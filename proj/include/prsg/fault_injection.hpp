#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prsg/bits.hpp"
#include "prsg/lfsr.hpp"
#include "prsg/linear_code_guard.hpp"
#include "prsg/rns.hpp"

namespace prsg {

enum class Mode { serial, block, parity, rns };

std::string to_string(Mode mode);
Mode parse_mode(std::string_view text);

enum class TargetKind { register_bit, feedback_bit, block_bit, check_symbol, residue_channel };
enum class ModelKind { invert, stuck_at, additive };
enum class Persistence { transient, permanent };

struct FaultTarget {
  TargetKind kind = TargetKind::feedback_bit;
  std::size_t index = 0;  // bit position, check number or channel; unused for feedback_bit

  bool operator==(const FaultTarget&) const = default;
};

struct FaultModel {
  ModelKind kind = ModelKind::invert;
  std::uint64_t value = 0;  // stuck-at level or additive delta

  bool operator==(const FaultModel&) const = default;
};

/// One modelled hardware fault.
///
/// `time` is a step index for the serial generator and a block index for the
/// block pipelines (block 0 is the seed). A permanent fault applies at every
/// step or block from `time` on.
struct FaultSpec {
  FaultTarget target;
  FaultModel model;
  std::uint64_t time = 0;
  Persistence persistence = Persistence::transient;

  bool active_at(std::uint64_t t) const noexcept {
    return persistence == Persistence::permanent ? t >= time : t == time;
  }

  bool operator==(const FaultSpec&) const = default;
};

// Text form TARGET[INDEX]@TIME[:MODEL][:permanent], for example
//   feedback@1   reg[2]@3:stuck0   block[1]@2   check[0]@1
//   channel[0]@2:add=1:permanent
// MODEL is invert (default), stuck0, stuck1 or add=<delta>.
FaultSpec parse_fault(std::string_view text);
std::string format_fault(const FaultSpec& fault);

std::uint8_t apply_fault(std::uint8_t bit, const FaultModel& model);
// Residue of modulus m; results are reduced back into [0, m).
std::uint64_t apply_fault(std::uint64_t residue, std::uint64_t modulus, const FaultModel& model);

// In-place injection into one pipeline value. Timing is the caller's
// business; these only check that the target fits the value.
void inject(LfsrState& state, const FaultSpec& fault);
void inject(PrsBlock& block, const FaultSpec& fault);
void inject(GuardedBlock& guarded, const FaultSpec& fault);
void inject(ResidueVector& values, std::span<const std::uint64_t> moduli, const FaultSpec& fault);

// A serial step with every fault active at state.step_index applied:
// register faults before the output is taken, feedback faults to the new bit.
StepResult faulty_step(const TapPolynomial& poly, const LfsrState& state, std::span<const FaultSpec> faults);

struct GeneratorConfig {
  TapPolynomial poly;
  Bits seed;
  Mode mode = Mode::serial;
  std::optional<ModuliSet> moduli;  // rns only
  std::vector<Bits> selectors;      // parity only; empty means one parity check
  unsigned threshold = 3;           // consecutive corrections before exclusion
  FaultPolicy policy = FaultPolicy::correct;
};

// Throws std::invalid_argument when mode-specific fields are missing or the
// seed does not match the degree.
void validate(const GeneratorConfig& config);
// Throws std::invalid_argument when the fault does not apply to this generator.
void validate(const FaultSpec& fault, const GeneratorConfig& config);

struct BlockEvent {
  std::uint64_t index = 0;
  std::optional<PrsBlock> block;  // emitted block; absent when withheld
  BlockStatus status = BlockStatus::ok;
  std::optional<std::size_t> channel;             // physical channel corrected
  std::optional<std::uint64_t> excluded_modulus;  // reconfiguration at this block
  Bits checks;                                    // parity mode
  Bits syndrome;                                  // parity mode
};

struct SimulationResult {
  Bits stream;
  std::vector<BlockEvent> blocks;  // empty for serial
  bool halted = false;             // rns stopped on an uncorrectable block
  std::vector<std::uint64_t> excluded_moduli;
};

// Runs the configured generator for n output bits under the given faults.
SimulationResult simulate(const GeneratorConfig& config, std::span<const FaultSpec> faults, std::size_t n);

struct Divergence {
  std::optional<std::size_t> first_divergence;
  // Smallest L with faulty[i] == correct[i - L] for every i from the first
  // divergence on, provided at least min_overlap positions were compared.
  std::optional<std::size_t> realign_lag;
};

Divergence analyze_divergence(std::span<const std::uint8_t> correct, std::span<const std::uint8_t> faulty,
                              std::size_t max_lag, std::size_t min_overlap);
// max_lag = 4 * degree, min_overlap = 2 * degree.
Divergence analyze_divergence(std::span<const std::uint8_t> correct, std::span<const std::uint8_t> faulty,
                              int degree);

enum class TrialStatus { masked, missed, detected, corrected, ambiguous };

std::string to_string(TrialStatus status);
TrialStatus parse_trial_status(std::string_view text);

// Flags win over output comparison: ambiguous, then detected, then corrected
// (only if the output matches the shadow run). An unflagged run is masked
// when its output matches and missed otherwise.
TrialStatus classify(const SimulationResult& shadow, const SimulationResult& faulty);

struct TrialRecord {
  TrialStatus status = TrialStatus::masked;
  std::optional<std::size_t> first_divergence;
  std::optional<std::size_t> realign_lag;
  std::vector<std::uint64_t> excluded_moduli;
  std::vector<FaultSpec> faults;

  bool operator==(const TrialRecord&) const = default;
};

struct DetectionReport {
  std::size_t trials = 0;
  std::size_t masked = 0;
  std::size_t missed = 0;
  std::size_t detected = 0;
  std::size_t corrected = 0;
  std::size_t ambiguous = 0;
  std::vector<TrialRecord> per_trial;

  bool operator==(const DetectionReport&) const = default;
};

struct FaultDistribution {
  std::vector<TargetKind> targets;  // one is drawn uniformly per fault
  ModelKind model = ModelKind::invert;
  Persistence persistence = Persistence::transient;
  std::size_t faults_per_trial = 1;
};

struct CampaignConfig {
  GeneratorConfig generator;
  FaultDistribution faults;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t length = 64;    // output bits per trial
  bool random_state = true;   // fresh nonzero seed register per trial
  unsigned threads = 0;       // 0: PRSG_THREADS, else hardware concurrency
};

// Worker count for `requested` (0 means environment/default).
unsigned campaign_threads(unsigned requested);

// One trial per schedule, all from the configured seed register.
DetectionReport run_schedules(const GeneratorConfig& config, const std::vector<std::vector<FaultSpec>>& schedules,
                              std::size_t length, unsigned threads = 0);

// Deterministic for a given config: trial i draws from a generator seeded by
// (seed, i) only, whatever the thread count.
DetectionReport run_campaign(const CampaignConfig& config);

std::string report_to_json(const DetectionReport& report, int indent = 2);
DetectionReport report_from_json(std::string_view text);

}  // namespace prsg
