#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>

#include "prsg/fault_injection.hpp"

using namespace prsg;

namespace {

const TapPolynomial kPoly = TapPolynomial::create(4, {1});
const Bits kSeed = {1, 0, 1, 0};
const Bits kExpected = {1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0};

GeneratorConfig config_for(Mode mode) {
  GeneratorConfig c{kPoly, kSeed, mode, std::nullopt, {}, 3, FaultPolicy::correct};
  if (mode == Mode::rns) c.moduli = build_moduli_set({13, 17, 19}, {23, 29}, 12);
  return c;
}

std::size_t classified(const DetectionReport& r) {
  return r.masked + r.missed + r.detected + r.corrected + r.ambiguous;
}

}  // namespace

TEST_CASE("fault text round trip") {
  for (const char* text : {"feedback@1", "reg[2]@3:stuck0", "reg[0]@0:stuck1", "block[1]@2", "check[0]@1",
                           "channel[0]@2:add=1:permanent", "channel[4]@7:add=28", "reg[3]@9:permanent"}) {
    CHECK(format_fault(parse_fault(text)) == text);
  }
  const auto f = parse_fault("channel[3]@5:add=4:permanent");
  CHECK(f.target == FaultTarget{TargetKind::residue_channel, 3});
  CHECK(f.model == FaultModel{ModelKind::additive, 4});
  CHECK(f.time == 5);
  CHECK(f.persistence == Persistence::permanent);
  CHECK(f.active_at(9));
  CHECK_FALSE(f.active_at(4));
  CHECK(parse_fault("block[1]@2:invert") == parse_fault("block[1]@2"));

  for (const char* bad : {"", "feedback", "reg@1", "reg[x]@1", "wire[0]@1", "reg[0]@1:add", "reg[0]@1:stuck2",
                          "reg[0]@-1", "feedback@1:permanent:extra", "channel[0]@1:add=0"}) {
    CHECK_THROWS_AS(parse_fault(bad), std::invalid_argument);
  }
}

TEST_CASE("apply_fault") {
  CHECK(apply_fault(std::uint8_t{0}, FaultModel{ModelKind::invert, 0}) == 1);
  CHECK(apply_fault(std::uint8_t{1}, FaultModel{ModelKind::stuck_at, 0}) == 0);
  CHECK(apply_fault(std::uint8_t{0}, FaultModel{ModelKind::stuck_at, 0}) == 0);
  CHECK(apply_fault(std::uint8_t{1}, FaultModel{ModelKind::additive, 1}) == 0);
  CHECK(apply_fault(std::uint64_t{12}, 13, FaultModel{ModelKind::additive, 1}) == 0);
  CHECK(apply_fault(std::uint64_t{5}, 13, FaultModel{ModelKind::additive, 4}) == 9);
  CHECK(apply_fault(std::uint64_t{5}, 13, FaultModel{ModelKind::invert, 0}) == 4);
  CHECK(apply_fault(std::uint64_t{12}, 13, FaultModel{ModelKind::invert, 0}) == 0);
  CHECK(apply_fault(std::uint64_t{5}, 13, FaultModel{ModelKind::stuck_at, 1}) == 1);
}

TEST_CASE("inject") {
  LfsrState s{{1, 0, 1, 0}, 0};
  inject(s, parse_fault("reg[1]@0"));
  CHECK(s.reg == Bits{1, 1, 1, 0});
  CHECK_THROWS_AS(inject(s, parse_fault("reg[4]@0")), std::invalid_argument);

  PrsBlock b{{0, 0, 0, 0}, 2};
  inject(b, parse_fault("block[3]@2:stuck1"));
  CHECK(b.bits == Bits{0, 0, 0, 1});

  GuardedBlock gb{b, {0}};
  inject(gb, parse_fault("check[0]@2"));
  CHECK(gb.checks == Bits{1});
  CHECK_THROWS_AS(inject(gb, parse_fault("check[1]@2")), std::invalid_argument);

  ResidueVector v{0, 7, 15, 10, 5};
  const std::vector<std::uint64_t> m{13, 17, 19, 23, 29};
  inject(v, m, parse_fault("channel[0]@1:add=1"));
  CHECK(v == ResidueVector{1, 7, 15, 10, 5});
  inject(v, m, parse_fault("channel[4]@1:add=25"));
  CHECK(v[4] == 1);
  CHECK_THROWS_AS(inject(v, m, parse_fault("channel[5]@1:add=1")), std::invalid_argument);
}

TEST_CASE("single feedback inversion replays the stream") {
  const auto cfg = config_for(Mode::serial);
  const auto correct = simulate(cfg, {}, 17);
  CHECK(correct.stream == kExpected);

  const std::vector<FaultSpec> faults{parse_fault("feedback@1")};
  const auto faulty = simulate(cfg, faults, 17);
  for (std::size_t i = 2; i < 17; ++i) CHECK(faulty.stream[i] == kExpected[i - 2]);

  const auto d = analyze_divergence(correct.stream, faulty.stream, 4);
  CHECK(d.first_divergence == 5u);
  CHECK(d.realign_lag == 2u);

  // The state after the faulty step 1 is the seed again.
  LfsrState st{kSeed, 0};
  st = faulty_step(kPoly, st, faults).state;
  st = faulty_step(kPoly, st, faults).state;
  CHECK(st.reg == kSeed);
}

TEST_CASE("stuck-at on a bit already at that level is masked") {
  const auto cfg = config_for(Mode::serial);
  // x_1 of the seed is 0.
  const std::vector<FaultSpec> faults{parse_fault("reg[1]@0:stuck0")};
  CHECK(simulate(cfg, faults, 17).stream == kExpected);
}

TEST_CASE("analyze_divergence") {
  const Bits a{1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0};
  auto d = analyze_divergence(a, a, 4);
  CHECK_FALSE(d.first_divergence);
  CHECK_FALSE(d.realign_lag);

  const Bits zeros(12, 0);
  const Bits ones(12, 1);
  d = analyze_divergence(zeros, ones, 4);
  CHECK(d.first_divergence == 0u);
  CHECK_FALSE(d.realign_lag);

  // Too few compared positions: no lag is claimed.
  d = analyze_divergence(Bits{0, 0, 0, 1}, Bits{0, 0, 0, 0}, 2, 4);
  CHECK(d.first_divergence == 3u);
  CHECK_FALSE(d.realign_lag);
}

TEST_CASE("all modes agree without faults") {
  for (auto mode : {Mode::serial, Mode::block, Mode::parity, Mode::rns}) {
    const auto r = simulate(config_for(mode), {}, 17);
    CHECK(r.stream == kExpected);
    CHECK_FALSE(r.halted);
  }
  CHECK(simulate(config_for(Mode::block), {}, 0).stream.empty());
}

TEST_CASE("simulate in protected modes") {
  SUBCASE("parity flags a flipped block bit") {
    const std::vector<FaultSpec> f{parse_fault("block[0]@2")};
    const auto r = simulate(config_for(Mode::parity), f, 16);
    REQUIRE(r.blocks.size() == 4);
    CHECK(r.blocks[1].status == BlockStatus::ok);
    CHECK(r.blocks[2].status == BlockStatus::detected);
    CHECK(r.blocks[2].syndrome == Bits{1});
  }
  SUBCASE("rns corrects a channel fault") {
    const std::vector<FaultSpec> f{parse_fault("channel[2]@1:add=3")};
    const auto r = simulate(config_for(Mode::rns), f, 17);
    CHECK(r.stream == kExpected);
    CHECK(r.blocks[1].status == BlockStatus::corrected);
    CHECK(r.blocks[1].channel == 2u);
  }
  SUBCASE("rns excludes a permanently faulty channel") {
    const std::vector<FaultSpec> f{parse_fault("channel[0]@1:add=1:permanent")};
    const auto r = simulate(config_for(Mode::rns), f, 28);
    CHECK(r.stream == simulate(config_for(Mode::serial), {}, 28).stream);
    CHECK(r.excluded_moduli == std::vector<std::uint64_t>{13});
    CHECK(r.blocks[3].excluded_modulus == 13u);
    CHECK(r.blocks[4].status == BlockStatus::ok);
  }
  SUBCASE("rns halts when it can only detect") {
    auto cfg = config_for(Mode::rns);
    cfg.moduli = build_moduli_set({13, 17, 19}, {23}, 12);
    const std::vector<FaultSpec> f{parse_fault("channel[1]@2:add=1")};
    const auto r = simulate(cfg, f, 17);
    CHECK(r.halted);
    CHECK(r.blocks.back().status == BlockStatus::detected);
    CHECK(r.stream.size() == 8);
  }
}

TEST_CASE("validate") {
  auto c = config_for(Mode::serial);
  c.seed = {1, 0};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);

  c = config_for(Mode::rns);
  c.moduli.reset();
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = config_for(Mode::serial);
  c.moduli = build_moduli_set({13, 17, 19}, {23, 29}, 12);
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = config_for(Mode::block);
  c.selectors = {parity_selector(4)};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = config_for(Mode::parity);
  c.selectors = {Bits{1, 1, 0, 0}, Bits{1, 1, 0, 0}};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = config_for(Mode::rns);
  c.threshold = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);

  CHECK_THROWS_AS(validate(parse_fault("channel[0]@1"), config_for(Mode::serial)), std::invalid_argument);
  CHECK_THROWS_AS(validate(parse_fault("channel[5]@1"), config_for(Mode::rns)), std::invalid_argument);
  CHECK_THROWS_AS(validate(parse_fault("reg[0]@1"), config_for(Mode::block)), std::invalid_argument);
  CHECK_THROWS_AS(validate(parse_fault("check[0]@1"), config_for(Mode::block)), std::invalid_argument);
  CHECK_THROWS_AS(validate(parse_fault("block[4]@1"), config_for(Mode::parity)), std::invalid_argument);
  CHECK_NOTHROW(validate(parse_fault("check[0]@1"), config_for(Mode::parity)));
  CHECK_NOTHROW(validate(parse_fault("feedback@0"), config_for(Mode::serial)));
}

TEST_CASE("trial status text") {
  for (auto s : {TrialStatus::masked, TrialStatus::missed, TrialStatus::detected, TrialStatus::corrected,
                 TrialStatus::ambiguous})
    CHECK(parse_trial_status(to_string(s)) == s);
  CHECK_THROWS_AS(parse_trial_status("fine"), std::invalid_argument);
  CHECK(parse_mode("rns") == Mode::rns);
  CHECK_THROWS_AS(parse_mode("turbo"), std::invalid_argument);
}

TEST_CASE("campaign on the unprotected generator misses every visible fault") {
  CampaignConfig c{config_for(Mode::serial), {{TargetKind::register_bit, TargetKind::feedback_bit}}, 1000, 42, 64};
  const auto r = run_campaign(c);
  CHECK(r.trials == 1000);
  CHECK(classified(r) == r.trials);
  CHECK(r.detected + r.corrected + r.ambiguous == 0);
  CHECK(r.missed == r.trials - r.masked);
  CHECK(r.missed > 0);
}

TEST_CASE("parity detects every single block-bit inversion") {
  for (std::uint32_t subset = 1; subset < 8; ++subset) {
    std::vector<int> taps;
    for (int t = 1; t < 4; ++t)
      if (subset >> (t - 1) & 1) taps.push_back(t);
    auto cfg = config_for(Mode::parity);
    cfg.poly = TapPolynomial::create(4, taps);
    for (std::uint32_t st = 1; st < 16; ++st) {
      cfg.seed = {static_cast<std::uint8_t>(st & 1), static_cast<std::uint8_t>(st >> 1 & 1),
                  static_cast<std::uint8_t>(st >> 2 & 1), static_cast<std::uint8_t>(st >> 3 & 1)};
      std::vector<std::vector<FaultSpec>> schedules;
      for (std::uint64_t t = 1; t < 6; ++t) {
        for (std::size_t i = 0; i < 4; ++i)
          schedules.push_back({FaultSpec{{TargetKind::block_bit, i}, {}, t, Persistence::transient}});
        schedules.push_back({FaultSpec{{TargetKind::check_symbol, 0}, {}, t, Persistence::transient}});
      }
      const auto r = run_schedules(cfg, schedules, 24, 1);
      CHECK(r.detected == r.trials - r.masked);
      CHECK(r.missed == 0);
    }
  }
}

TEST_CASE("rns corrects every single-channel additive fault") {
  const auto cfg = config_for(Mode::rns);
  std::vector<std::vector<FaultSpec>> schedules;
  for (std::uint64_t t = 1; t < 8; ++t)
    for (std::size_t ch = 0; ch < 5; ++ch)
      for (std::uint64_t d = 1; d < cfg.moduli->modulus(ch); ++d)
        schedules.push_back({FaultSpec{{TargetKind::residue_channel, ch}, {ModelKind::additive, d}, t,
                                       Persistence::transient}});
  const auto r = run_schedules(cfg, schedules, 32);
  CHECK(r.trials == schedules.size());
  CHECK(r.corrected == r.trials);
  CHECK(r.missed == 0);

  CampaignConfig c{cfg, {{TargetKind::residue_channel}, ModelKind::additive}, 500, 9, 40};
  const auto rc = run_campaign(c);
  CHECK(rc.corrected == rc.trials);
}

TEST_CASE("campaigns are deterministic whatever the thread count") {
  CampaignConfig c{config_for(Mode::rns), {{TargetKind::residue_channel, TargetKind::block_bit}, ModelKind::invert,
                                           Persistence::transient, 2},
                   300, 77, 40};
  c.threads = 1;
  const auto one = run_campaign(c);
  c.threads = 4;
  const auto four = run_campaign(c);
  c.threads = 13;
  CHECK(run_campaign(c) == one);
  CHECK(four == one);
  CHECK(classified(one) == one.trials);
  c.seed = 78;
  CHECK_FALSE(run_campaign(c) == one);

  ::setenv("PRSG_THREADS", "3", 1);
  CHECK(campaign_threads(0) == 3);
  CHECK(campaign_threads(5) == 5);
  ::unsetenv("PRSG_THREADS");
  CHECK(campaign_threads(0) >= 1);
}

TEST_CASE("an empty fault list never disturbs the shadow run") {
  for (auto mode : {Mode::serial, Mode::block, Mode::parity, Mode::rns}) {
    CampaignConfig c{config_for(mode), {{}, ModelKind::invert, Persistence::transient, 0}, 100, 5, 32};
    const auto r = run_campaign(c);
    CHECK(r.trials == 100);
    CHECK(r.masked == 100);
    CHECK(r.missed + r.detected + r.corrected + r.ambiguous == 0);
  }
}

TEST_CASE("report JSON round trip") {
  CampaignConfig c{config_for(Mode::serial), {{TargetKind::feedback_bit}}, 50, 3, 24};
  const auto r = run_campaign(c);
  const auto text = report_to_json(r);
  CHECK(report_from_json(text) == r);
  CHECK(text.find("\"per_trial\"") != std::string::npos);
  CHECK_THROWS(report_from_json("{\"trials\": 1}"));
  CHECK_THROWS(report_from_json("not json"));
}
