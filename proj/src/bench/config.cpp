#include "bpinv/bench/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "bpinv/error.hpp"

namespace bpinv::bench {
namespace {

using Scalar = std::variant<double, std::string, bool>;
using Value = std::vector<Scalar>;  // a bare scalar is a one-element list

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(ErrorCode::ConfigError, "line " + std::to_string(line) + ": " + msg);
}

Scalar parse_scalar(const std::string& raw, int line) {
  const std::string s = trim(raw);
  if (s.empty()) fail(line, "empty value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') fail(line, "unterminated string");
    return s.substr(1, s.size() - 2);
  }
  if (s == "true") return true;
  if (s == "false") return false;
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(line, "cannot parse value '" + s + "'");
  }
  if (used != s.size()) fail(line, "trailing characters in '" + s + "'");
  return v;
}

// Strips a trailing comment that is not inside a string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

Value parse_value(const std::string& raw, int line) {
  const std::string s = trim(raw);
  if (s.empty()) fail(line, "missing value");
  if (s.front() != '[') return {parse_scalar(s, line)};
  if (s.back() != ']') fail(line, "unterminated array");
  Value out;
  const std::string body = trim(s.substr(1, s.size() - 2));
  if (body.empty()) return out;
  std::string item;
  bool quoted = false;
  for (char c : body) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      out.push_back(parse_scalar(item, line));
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  if (!trim(item).empty()) out.push_back(parse_scalar(item, line));
  return out;
}

struct Entry {
  Value value;
  int line;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  double number(const std::string& key) {
    const Entry& e = scalar_entry(key);
    if (const double* d = std::get_if<double>(&e.value.front())) return *d;
    fail(e.line, key + " must be a number");
  }

  Index integer(const std::string& key) { return to_integer(key, number(key), entries_.at(key).line); }

  bool boolean(const std::string& key) {
    const Entry& e = scalar_entry(key);
    if (const bool* b = std::get_if<bool>(&e.value.front())) return *b;
    fail(e.line, key + " must be true or false");
  }

  std::string string(const std::string& key) {
    const Entry& e = scalar_entry(key);
    if (const std::string* s = std::get_if<std::string>(&e.value.front())) return *s;
    fail(e.line, key + " must be a quoted string");
  }

  std::vector<double> numbers(const std::string& key) {
    const Entry& e = take(key);
    std::vector<double> out;
    for (const Scalar& s : e.value) {
      const double* d = std::get_if<double>(&s);
      if (d == nullptr) fail(e.line, key + " must hold numbers");
      out.push_back(*d);
    }
    return out;
  }

  std::vector<Index> integers(const std::string& key) {
    const int line = entries_.count(key) ? entries_.at(key).line : 0;
    std::vector<Index> out;
    for (double d : numbers(key)) out.push_back(to_integer(key, d, line));
    return out;
  }

  std::vector<std::string> strings(const std::string& key) {
    const Entry& e = take(key);
    std::vector<std::string> out;
    for (const Scalar& s : e.value) {
      const std::string* str = std::get_if<std::string>(&s);
      if (str == nullptr) fail(e.line, key + " must hold quoted strings");
      out.push_back(*str);
    }
    return out;
  }

  void reject_unused() const {
    for (const auto& [key, entry] : entries_) {
      if (!used_.count(key)) fail(entry.line, "unknown key '" + key + "'");
    }
  }

 private:
  static Index to_integer(const std::string& key, double d, int line) {
    if (!std::isfinite(d) || d != std::floor(d)) fail(line, key + " must be an integer");
    return static_cast<Index>(d);
  }

  const Entry& take(const std::string& key) {
    used_[key] = true;
    return entries_.at(key);
  }

  const Entry& scalar_entry(const std::string& key) {
    const Entry& e = take(key);
    if (e.value.size() != 1) fail(e.line, key + " must be a single value");
    return e;
  }

  std::map<std::string, Entry> entries_;
  std::map<std::string, bool> used_;
};

ExperimentKind parse_kind(const std::string& s) {
  static const std::pair<const char*, ExperimentKind> kinds[] = {
      {"cs_pgd_sweepR", ExperimentKind::CsPgdSweepR},         {"cs_pgd_ratios", ExperimentKind::CsPgdRatios},
      {"cs_fista_sweepBeta", ExperimentKind::CsFistaSweepBeta}, {"cs_controlled", ExperimentKind::CsControlled},
      {"rate_curves", ExperimentKind::RateCurves},             {"ista_family", ExperimentKind::IstaFamily},
      {"sr_pgd", ExperimentKind::SrPgd},
  };
  for (const auto& [name, kind] : kinds) {
    if (s == name) return kind;
  }
  throw Error(ErrorCode::ConfigError, "unknown experiment kind '" + s + "'");
}

FidelityKind parse_fidelity(const std::string& s) {
  if (s == "LS" || s == "ls") return FidelityKind::LS;
  if (s == "BP" || s == "bp") return FidelityKind::BP;
  throw Error(ErrorCode::ConfigError, "unknown fidelity '" + s + "'");
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorCode::ConfigError, msg);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::CsPgdSweepR: return "cs_pgd_sweepR";
    case ExperimentKind::CsPgdRatios: return "cs_pgd_ratios";
    case ExperimentKind::CsFistaSweepBeta: return "cs_fista_sweepBeta";
    case ExperimentKind::CsControlled: return "cs_controlled";
    case ExperimentKind::RateCurves: return "rate_curves";
    case ExperimentKind::IstaFamily: return "ista_family";
    case ExperimentKind::SrPgd: return "sr_pgd";
  }
  return "unknown";
}

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) fail(line, "missing key");
    if (entries.count(key)) fail(line, "duplicate key '" + key + "'");
    entries[key] = Entry{parse_value(s.substr(eq + 1), line), line};
  }

  Reader r(std::move(entries));
  ExperimentConfig cfg;
  if (!r.has("experiment")) throw Error(ErrorCode::ConfigError, "missing required key 'experiment'");
  cfg.kind = parse_kind(r.string("experiment"));
  cfg.name = r.has("name") ? r.string("name") : std::string(to_string(cfg.kind));
  if (r.has("n")) cfg.n = r.integer("n");
  if (r.has("side")) cfg.side = r.integer("side");
  if (r.has("haar")) cfg.haar = r.boolean("haar");
  if (r.has("m")) cfg.m = r.integer("m");
  if (r.has("m_ratios")) cfg.m_ratios = r.numbers("m_ratios");
  if (r.has("ms")) cfg.ms = r.integers("ms");
  if (r.has("ks")) cfg.ks = r.integers("ks");
  if (r.has("scale")) cfg.scale = r.integer("scale");
  if (r.has("kernel_size")) cfg.kernel_size = r.integer("kernel_size");
  if (r.has("kernel_sigma")) cfg.kernel_sigma = r.number("kernel_sigma");
  if (r.has("signal")) {
    const std::string s = r.string("signal");
    if (s == "sparse") cfg.signal = SignalKind::Sparse;
    else if (s == "image") cfg.signal = SignalKind::Image;
    else throw Error(ErrorCode::ConfigError, "signal must be \"sparse\" or \"image\"");
  }
  if (r.has("k")) cfg.k = r.integer("k");
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? p : (std::filesystem::path(base_dir) / path).string();
  };
  if (r.has("images"))
    for (const std::string& p : r.strings("images")) cfg.images.push_back(resolve(p));
  if (r.has("paper_images"))
    for (const std::string& p : r.strings("paper_images")) cfg.paper_images.push_back(resolve(p));
  if (r.has("snr_db")) cfg.snr_db = r.number("snr_db");
  if (r.has("r_scales")) cfg.r_scales = r.numbers("r_scales");
  if (r.has("betas")) cfg.betas = r.numbers("betas");
  if (r.has("fidelities")) {
    cfg.fidelities.clear();
    for (const std::string& s : r.strings("fidelities")) cfg.fidelities.push_back(parse_fidelity(s));
  }
  if (r.has("iters")) cfg.iters = static_cast<int>(r.integer("iters"));
  if (r.has("star_iters")) cfg.star_iters = static_cast<int>(r.integer("star_iters"));
  if (r.has("record_every")) cfg.record_every = static_cast<int>(r.integer("record_every"));
  if (r.has("num_supports")) cfg.num_supports = static_cast<int>(r.integer("num_supports"));
  if (r.has("seeds")) {
    cfg.seeds.clear();
    for (Index s : r.integers("seeds")) {
      require(s >= 0, "seeds must be non-negative");
      cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  if (r.has("paper_n")) cfg.paper_n = r.integer("paper_n");
  if (r.has("output")) cfg.output = r.string("output");
  r.reject_unused();

  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(buf.str(), dir.empty() ? "." : dir.string());
}

void apply_paper_scale(ExperimentConfig& cfg) {
  if (cfg.paper_n <= cfg.n) return;
  const double factor = static_cast<double>(cfg.paper_n) / static_cast<double>(cfg.n);
  if (cfg.signal == SignalKind::Image) {
    if (cfg.paper_images.empty()) {
      throw Error(ErrorCode::ConfigError, "paper scale with image signals needs a paper_images list");
    }
    cfg.images = cfg.paper_images;
  }
  cfg.k = static_cast<Index>(std::llround(static_cast<double>(cfg.k) * factor));
  cfg.m = static_cast<Index>(std::llround(static_cast<double>(cfg.m) * factor));
  for (Index& m : cfg.ms) m = static_cast<Index>(std::llround(static_cast<double>(m) * factor));
  if (cfg.side > 0) cfg.side = static_cast<Index>(std::llround(static_cast<double>(cfg.side) * std::sqrt(factor)));
  cfg.n = cfg.paper_n;
  validate(cfg);
}

void validate(const ExperimentConfig& cfg) {
  require(!cfg.seeds.empty(), "seed list is empty");
  require(cfg.iters >= 1 && cfg.star_iters >= 1 && cfg.record_every >= 1, "iteration counts must be >= 1");
  require(!cfg.fidelities.empty(), "fidelity list is empty");
  const bool uses_k = cfg.kind != ExperimentKind::RateCurves &&
                      (cfg.signal == SignalKind::Sparse || cfg.kind == ExperimentKind::CsControlled);
  if (uses_k) require(cfg.k >= 1, "k must be >= 1");
  require(cfg.snr_db > 0.0 || std::isinf(cfg.snr_db), "snr_db must be positive or inf");
  if (cfg.signal == SignalKind::Image) {
    require(!cfg.images.empty(), "signal = \"image\" needs an images list");
    for (const std::string& p : cfg.images) require(std::filesystem::exists(p), "image not found: " + p);
  }
  require(cfg.n >= 1, "n must be positive");
  if (cfg.signal == SignalKind::Sparse && (cfg.haar || cfg.kind == ExperimentKind::SrPgd)) {
    require(cfg.side > 0 && cfg.side * cfg.side == cfg.n, "Haar-domain runs need side with side^2 = n");
  }
  if (uses_k) require(cfg.k <= cfg.n, "k exceeds n");
  switch (cfg.kind) {
    case ExperimentKind::CsPgdRatios:
      require(!cfg.m_ratios.empty(), "cs_pgd_ratios needs m_ratios");
      for (double r : cfg.m_ratios) require(r > 0.0 && r <= 1.0, "m_ratios must lie in (0, 1]");
      break;
    case ExperimentKind::RateCurves:
      require(!cfg.ms.empty() && !cfg.ks.empty(), "rate_curves needs ms and ks");
      for (Index m : cfg.ms) require(m >= 1 && m <= cfg.n, "ms must lie in [1, n]");
      for (Index k : cfg.ks)
        for (Index m : cfg.ms) require(k >= 1 && k <= m, "every k must be in [1, m]");
      require(cfg.num_supports >= 1, "num_supports must be >= 1");
      break;
    case ExperimentKind::SrPgd:
      require(cfg.scale >= 1 && cfg.kernel_size >= 1 && cfg.kernel_size % 2 == 1, "bad SR geometry");
      break;
    case ExperimentKind::CsFistaSweepBeta:
    case ExperimentKind::IstaFamily:
      require(!cfg.betas.empty(), "betas is empty");
      for (double b : cfg.betas) require(b >= 0.0, "betas must be >= 0");
      [[fallthrough]];
    default:
      if (cfg.kind != ExperimentKind::SrPgd) {
        require(cfg.m >= 1 && cfg.m <= cfg.n, "m must lie in [1, n]");
      }
      break;
  }
  for (double r : cfg.r_scales) require(r > 0.0, "r_scales must be positive");
}

}  // namespace bpinv::bench
