#include "oppenheim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace oppenheim {

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

struct Entry {
  std::string value;
  int line;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::map<std::string, Entry> read_entries(const std::string& text) {
  std::map<std::string, Entry> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigurationError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigurationError("line " + std::to_string(lineno) + ": empty key");
    if (out.count(key)) throw ConfigurationError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    out[key] = {value, lineno};
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  // Value of key, or the default (recorded as such).
  std::string get(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    if (auto it = entries_.find(key); it != entries_.end()) {
      effective_.emplace_back(key, it->second.value);
      return it->second.value;
    }
    effective_.emplace_back(key, fallback + "  (default)");
    return fallback;
  }

  std::optional<std::string> optional(const std::string& key) {
    used_.insert(key);
    if (auto it = entries_.find(key); it != entries_.end()) {
      effective_.emplace_back(key, it->second.value);
      return it->second.value;
    }
    return std::nullopt;
  }

  // Runs f(value); rethrows errors with the key's line number.
  template <class F>
  auto parse(const std::string& key, const std::string& value, F&& f) {
    try {
      return f(value);
    } catch (const std::exception& e) {
      throw ConfigurationError(where(key) + e.what());
    }
  }

  std::string where(const std::string& key) const {
    if (auto it = entries_.find(key); it != entries_.end()) {
      return "line " + std::to_string(it->second.line) + " (" + key + "): ";
    }
    return "default " + key + ": ";
  }

  void reject_unknown() const {
    std::vector<std::pair<int, std::string>> unknown;
    for (const auto& [key, entry] : entries_) {
      if (!used_.count(key)) unknown.emplace_back(entry.line, key);
    }
    if (!unknown.empty()) {
      std::sort(unknown.begin(), unknown.end());
      throw ConfigurationError("line " + std::to_string(unknown.front().first) + ": unknown key '" +
                               unknown.front().second + "'");
    }
  }

  std::vector<std::pair<std::string, std::string>> effective() const { return effective_; }

 private:
  std::map<std::string, Entry> entries_;
  std::set<std::string> used_;
  std::vector<std::pair<std::string, std::string>> effective_;
};

long parse_long(const std::string& s) {
  Rational r = parse_rational(s);
  if (r.get_den() != 1 || !r.get_num().fits_slong_p()) throw ConfigurationError("expected an integer, got '" + s + "'");
  return r.get_num().get_si();
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigurationError("expected true or false, got '" + s + "'");
}

std::vector<std::uint32_t> parse_primes(const std::string& s) {
  std::vector<std::uint32_t> out;
  if (trim(s).empty()) return out;
  for (const auto& tok : split(s, ',')) {
    long p = parse_long(tok);
    if (p <= 0) throw ConfigurationError("primes must be positive");
    out.push_back(static_cast<std::uint32_t>(p));
  }
  return out;
}

RealInterval parse_real_interval(const std::string& s) {
  auto parts = split(s, ',');
  if (parts.size() != 2) throw ConfigurationError("real interval must be 'lo, hi'");
  return RealInterval(parse_real(parts[0]), parse_real(parts[1]));
}

SquareMatrix<Rational> parse_basis(const std::string& s, int n) {
  auto rows = split(s, ';');
  if (static_cast<int>(rows.size()) != n) throw ConfigurationError("basis needs " + std::to_string(n) + " rows");
  SquareMatrix<Rational> b(n);
  for (int i = 0; i < n; ++i) {
    std::istringstream in(rows[i]);
    std::vector<std::string> toks;
    for (std::string t; in >> t;) toks.push_back(t);
    if (static_cast<int>(toks.size()) != n) throw ConfigurationError("basis rows need " + std::to_string(n) + " entries");
    for (int j = 0; j < n; ++j) b(i, j) = parse_rational(toks[j]);
  }
  return b;
}

}  // namespace

std::string config_hash(const std::string& text) {
  std::vector<std::string> lines;
  for (const auto& [key, entry] : read_entries(text)) lines.push_back(key + "=" + entry.value);
  std::sort(lines.begin(), lines.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& line : lines) {
    for (unsigned char c : line + "\n") {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Config parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  Reader rd(read_entries(text));
  Config cfg;
  cfg.hash = config_hash(text);

  {
    const std::string v = rd.get("primes", "");
    cfg.s = rd.parse("primes", v, [](const std::string& x) { return SSet(parse_primes(x)); });
  }
  {
    const std::string v = rd.get("rank", "3");
    cfg.rank = static_cast<int>(rd.parse("rank", v, parse_long));
    if (cfg.rank != 3 && cfg.rank != 4) throw ConfigurationError(rd.where("rank") + "rank must be 3 or 4");
  }
  const auto& primes = cfg.s.primes();
  const int n = cfg.rank;

  {
    const std::string v = rd.get("form", "standard");
    if (v == "standard") {
      cfg.form_source = FormSource::Standard;
    } else if (v == "random") {
      cfg.form_source = FormSource::Random;
    } else if (v == "file") {
      cfg.form_source = FormSource::File;
    } else {
      throw ConfigurationError(rd.where("form") + "form must be standard, random or file");
    }
  }
  if (cfg.form_source == FormSource::File) {
    auto path = rd.optional("form_file");
    if (!path) throw ConfigurationError("form = file needs form_file");
    cfg.form_text = rd.parse("form_file", *path, [&](const std::string& x) { return read_file(base_dir / x); });
  }
  if (cfg.form_source == FormSource::Random) {
    const std::string seed = rd.get("seed", "1");
    cfg.seed = static_cast<std::uint64_t>(rd.parse("seed", seed, parse_long));
    const std::string steps = rd.get("steps", "12");
    cfg.steps = static_cast<int>(rd.parse("steps", steps, parse_long));
    if (cfg.steps < 1) throw ConfigurationError(rd.where("steps") + "steps must be at least 1");
  }

  auto coefficient = [&](const std::string& key) {
    const std::string v = rd.get(key, "1");
    return rd.parse(key, v, [](const std::string& x) { return parse_rational(x); });
  };
  cfg.standard.real.a1 = coefficient("a1_inf");
  if (n == 4) cfg.standard.real.a2 = coefficient("a2_inf");
  for (auto p : primes) {
    const std::string ps = std::to_string(p);
    StandardCoefficients c;
    c.a1 = coefficient("a1_" + ps);
    if (n == 4) c.a2 = coefficient("a2_" + ps);
    cfg.standard.finite[p] = c;
    const std::string u0 = rd.get("u0_" + ps, std::to_string(smallest_nonresidue(p)));
    cfg.standard.u0[p] = rd.parse("u0_" + ps, u0, [](const std::string& x) { return parse_rational(x); });
  }

  cfg.omega = StarBody::unit(cfg.s);
  if (auto table = rd.optional("rho_inf_table")) {
    cfg.omega.inf = rd.parse("rho_inf_table", *table, [&](const std::string& x) {
      return RealRadius::table(SphereTable::parse(read_file(base_dir / x)));
    });
  } else {
    const std::string v = rd.get("rho_inf", "1");
    cfg.omega.inf = rd.parse("rho_inf", v, [](const std::string& x) { return RealRadius::constant(parse_real(x)); });
  }
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const std::string key = "rho_" + std::to_string(primes[i]);
    const std::string v = rd.get(key, "0");
    cfg.omega.finite_exp[i] = rd.parse(key, v, parse_long);
  }
  rd.parse("rank", std::string(), [&](const std::string&) {
    cfg.omega.validate(cfg.s, n);
    return 0;
  });

  {
    const std::string v = rd.get("I_inf", "-1/2, 1/2");
    cfg.I.real = rd.parse("I_inf", v, parse_real_interval);
  }
  for (auto p : primes) {
    const std::string key = "I_" + std::to_string(p);
    const std::string v = rd.get(key, "0+" + std::to_string(p) + "^0");
    auto iv = rd.parse(key, v, [](const std::string& x) { return parse_padic_interval(x); });
    if (iv.p != p) throw ConfigurationError(rd.where(key) + "interval prime does not match the key");
    cfg.I.finite.push_back(iv);
  }

  {
    const std::string v = rd.get("T_inf", "1");
    std::vector<Real> tinf;
    for (const auto& tok : split(v, ',')) tinf.push_back(rd.parse("T_inf", tok, [](const std::string& x) {
      Real r = parse_real(x);
      if (!(r >= 0)) throw ConfigurationError("T_inf must be nonnegative");
      return r;
    }));
    std::vector<std::vector<std::optional<int>>> tp;
    for (auto p : primes) {
      const std::string key = "t_" + std::to_string(p);
      const std::string tv = rd.get(key, "0");
      std::vector<std::optional<int>> col;
      for (const auto& tok : split(tv, ',')) {
        if (tok == "-inf") {
          col.emplace_back(std::nullopt);
        } else {
          long t = rd.parse(key, tok, parse_long);
          if (t < 0) throw ConfigurationError(rd.where(key) + "t_p must be nonnegative (or -inf for T_p = 0)");
          col.emplace_back(static_cast<int>(t));
        }
      }
      if (col.size() != 1 && col.size() != tinf.size()) {
        throw ConfigurationError(rd.where(key) + "needs one value or as many values as T_inf");
      }
      tp.push_back(std::move(col));
    }
    for (std::size_t k = 0; k < tinf.size(); ++k) {
      Radii T;
      T.T_inf = tinf[k];
      for (const auto& col : tp) T.t.push_back(col.size() == 1 ? col[0] : col[k]);
      cfg.schedule.push_back(T);
    }
    rd.parse("T_inf", v, [&](const std::string&) {
      validate_schedule(cfg.schedule, cfg.s);
      return 0;
    });
  }

  {
    const std::string v = rd.get("mc_samples", "1000000");
    long samples = rd.parse("mc_samples", v, parse_long);
    if (samples < 10000) throw ConfigurationError(rd.where("mc_samples") + "mc_samples must be at least 10000");
    cfg.mc.samples = static_cast<std::uint64_t>(samples);
    const std::string seed = rd.get("mc_seed", "1");
    cfg.mc.seed = static_cast<std::uint64_t>(rd.parse("mc_seed", seed, parse_long));
  }
  {
    const std::string v = rd.get("region", "body");
    if (v == "body") {
      cfg.count.region = Region::Body;
    } else if (v == "shell") {
      cfg.count.region = Region::Shell;
    } else {
      throw ConfigurationError(rd.where("region") + "region must be body or shell");
    }
    const std::string origin = rd.get("include_origin", "true");
    cfg.count.include_origin = rd.parse("include_origin", origin, parse_bool);
    const std::string sieve = rd.get("sieve", "true");
    cfg.count.use_sieve = rd.parse("sieve", sieve, parse_bool);
    const std::string cap = rd.get("safety_cap", std::to_string(kDefaultSafetyCap));
    long c = rd.parse("safety_cap", cap, parse_long);
    if (c < 1) throw ConfigurationError(rd.where("safety_cap") + "safety_cap must be positive");
    cfg.count.safety_cap = static_cast<std::uint64_t>(c);
  }

  {
    if (auto b = rd.optional("basis")) {
      const int dim = static_cast<int>(split(*b, ';').size());
      cfg.basis = rd.parse("basis", *b, [&](const std::string& x) { return parse_basis(x, dim); });
      rd.parse("basis", *b, [&](const std::string&) {
        SLattice{cfg.s, cfg.basis}.validate();
        return 0;
      });
    } else {
      rd.get("basis", "identity");
      cfg.basis = SquareMatrix<Rational>::identity(n);
    }
    const std::string h = rd.get("alpha_height", "2");
    cfg.alpha_height = static_cast<int>(rd.parse("alpha_height", h, parse_long));
    if (cfg.alpha_height < 1) throw ConfigurationError(rd.where("alpha_height") + "alpha_height must be at least 1");
    const std::string r = rd.get("siegel_radius", "3/2");
    cfg.siegel.radius = rd.parse("siegel_radius", r, [](const std::string& x) { return parse_real(x); });
    const std::string height = rd.get("siegel_height", "1");
    cfg.siegel.height = rd.parse("siegel_height", height, [](const std::string& x) { return parse_real(x); });
    for (auto p : primes) {
      const std::string key = "siegel_exp_" + std::to_string(p);
      const std::string v = rd.get(key, "0");
      cfg.siegel.finite_exp.push_back(rd.parse(key, v, parse_long));
    }
  }

  rd.reject_unknown();
  cfg.effective = rd.effective();

  // Catch form errors (menu, degeneracy) before any work starts.
  try {
    build_form(cfg);
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(std::string("form: ") + e.what());
  }
  return cfg;
}

SQuadraticForm build_form(const Config& cfg) {
  switch (cfg.form_source) {
    case FormSource::Standard:
      return standard_form(cfg.rank, cfg.s, cfg.standard);
    case FormSource::Random:
      return random_generic_form(cfg.seed, cfg.rank, cfg.s, cfg.steps, cfg.standard).form;
    case FormSource::File: {
      auto q = parse_form(cfg.form_text, cfg.s);
      if (q.rank() != cfg.rank) throw ConfigurationError("form_file rank differs from 'rank'");
      return q;
    }
  }
  throw std::logic_error("unknown form source");
}

}  // namespace oppenheim
