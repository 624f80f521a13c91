#include "prsg/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "prsg/arithmetization.hpp"

namespace prsg {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view s, const std::string& where) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument(where + ": expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string to_string(FaultPolicy policy) {
  return policy == FaultPolicy::correct ? "correct" : "detect-only";
}

FaultPolicy parse_policy(std::string_view text) {
  if (text == "correct") return FaultPolicy::correct;
  if (text == "detect-only") return FaultPolicy::detect_only;
  throw std::invalid_argument("unknown policy '" + std::string(text) + "' (correct, detect-only)");
}

std::vector<Bits> parse_selectors(std::string_view text) {
  std::vector<Bits> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_bits(trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string where = "config line " + std::to_string(line_no);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw std::invalid_argument(where + ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "generator" && section != "rns" && section != "faults") {
        throw std::invalid_argument(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument(where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    try {
      if (section == "generator") {
        if (key == "poly") cfg.poly = parse_polynomial(std::string(value));
        else if (key == "seed") cfg.seed = parse_bits(value);
        else if (key == "mode") cfg.mode = parse_mode(value);
        else if (key == "length") cfg.length = parse_number<std::size_t>(value, where);
        else if (key == "format") {
          if (value == "ascii") cfg.format = OutputFormat::ascii;
          else if (value == "hex") cfg.format = OutputFormat::hex;
          else throw std::invalid_argument("format must be ascii or hex");
        } else if (key == "selectors") cfg.selectors = parse_selectors(value);
        else throw std::invalid_argument("unknown key '" + key + "'");
      } else if (section == "rns") {
        if (key == "moduli") cfg.moduli = std::string(value);
        else if (key == "threshold") cfg.threshold = parse_number<unsigned>(value, where);
        else if (key == "policy") cfg.policy = parse_policy(value);
        else throw std::invalid_argument("unknown key '" + key + "'");
      } else if (section == "faults") {
        if (key == "fault") cfg.faults.push_back(parse_fault(value));
        else throw std::invalid_argument("unknown key '" + key + "'");
      } else {
        throw std::invalid_argument("key outside of any section");
      }
    } catch (const std::invalid_argument& e) {
      const std::string msg = e.what();
      if (msg.rfind("config line", 0) == 0) throw;
      throw std::invalid_argument(where + ": " + msg);
    }
  }
  return cfg;
}

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "[generator]\n";
  if (cfg.poly) os << "poly = " << cfg.poly->to_string() << '\n';
  if (cfg.seed) os << "seed = " << format_bits(*cfg.seed) << '\n';
  os << "mode = " << to_string(cfg.mode) << '\n';
  os << "length = " << cfg.length << '\n';
  os << "format = " << (cfg.format == OutputFormat::hex ? "hex" : "ascii") << '\n';
  if (!cfg.selectors.empty()) {
    os << "selectors = ";
    for (std::size_t i = 0; i < cfg.selectors.size(); ++i) os << (i ? "," : "") << format_bits(cfg.selectors[i]);
    os << '\n';
  }
  os << "\n[rns]\n";
  if (cfg.moduli) os << "moduli = " << *cfg.moduli << '\n';
  os << "threshold = " << cfg.threshold << '\n';
  os << "policy = " << to_string(cfg.policy) << '\n';
  os << "\n[faults]\n";
  for (const auto& f : cfg.faults) os << "fault = " << format_fault(f) << '\n';
  return os.str();
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

GeneratorConfig resolve(const RunConfig& cfg) {
  if (!cfg.poly) throw std::invalid_argument("no polynomial given");
  if (!cfg.seed) throw std::invalid_argument("no seed given");
  if ((cfg.mode == Mode::rns) != cfg.moduli.has_value()) {
    throw std::invalid_argument(cfg.mode == Mode::rns ? "rns mode needs --moduli"
                                                      : "moduli are only meaningful in rns mode");
  }
  GeneratorConfig gen{*cfg.poly, *cfg.seed, cfg.mode, std::nullopt, cfg.selectors, cfg.threshold, cfg.policy};
  if (cfg.moduli) {
    const auto lnp = pack_system(block_matrix(*cfg.poly));
    gen.moduli = parse_moduli(*cfg.moduli, lnp.total_width());
  }
  validate(gen);
  for (const auto& f : cfg.faults) validate(f, gen);
  return gen;
}

}  // namespace prsg
