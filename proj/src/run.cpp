#include <omp.h>

#include <chrono>
#include <fstream>
#include <sstream>

#include "oppenheim/config.hpp"
#include "oppenheim/geometry.hpp"

#ifndef OPPENHEIM_VERSION
#define OPPENHEIM_VERSION "0.0.0"
#endif

namespace oppenheim {

namespace {

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << data;
}

std::string t_columns(const SSet& s) {
  std::string out = "Tinf";
  for (auto p : s.primes()) out += ",t_" + std::to_string(p);
  return out;
}

std::string t_values(const Radii& T) {
  std::string out = format_real(T.T_inf);
  for (const auto& t : T.t) out += "," + format_t(t);
  return out;
}

std::string vector_dump(const std::vector<SVector>& vs, int n) {
  std::ostringstream os;
  for (int i = 1; i <= n; ++i) os << 'w' << i << ',';
  os << "denom\n";
  for (const auto& v : vs) {
    for (auto x : v.w) os << x << ',';
    os << v.denom << '\n';
  }
  return os.str();
}

std::vector<std::string> form_notes(const Config& cfg, const SQuadraticForm& q) {
  std::vector<std::string> notes;
  switch (cfg.form_source) {
    case FormSource::Standard:
      notes.push_back("form: standard");
      break;
    case FormSource::Random:
      notes.push_back("form: random seed=" + std::to_string(cfg.seed) + " steps=" + std::to_string(cfg.steps));
      break;
    case FormSource::File:
      notes.push_back("form: file");
      break;
  }
  std::istringstream in(serialize(q));
  for (std::string line; std::getline(in, line);) notes.push_back("form " + line);
  for (const auto& [p, u0] : cfg.standard.u0) notes.push_back("u0_" + std::to_string(p) + "=" + to_string(u0));
  notes.push_back("mc_samples=" + std::to_string(cfg.mc.samples) + " mc_seed=" + std::to_string(cfg.mc.seed));
  return notes;
}

struct Outputs {
  std::vector<std::string> files;
};

Outputs run_count(const Config& cfg, const RunOptions& opts) {
  const auto q = build_form(cfg);
  CountOptions co = cfg.count;
  co.keep_vectors = opts.dump_vectors;
  std::ostringstream os;
  os << "# config_hash=" << cfg.hash << '\n';
  os << "# region=" << to_string(co.region) << " include_origin=" << (co.include_origin ? "true" : "false")
     << " sieve=" << (co.use_sieve ? "true" : "false") << '\n';
  os << t_columns(cfg.s) << ",absT,N,candidates,sieve_admitted\n";
  Outputs out;
  for (std::size_t k = 0; k < cfg.schedule.size(); ++k) {
    const auto& T = cfg.schedule[k];
    const auto r = count_N(q, cfg.omega, cfg.I, T, co);
    os << t_values(T) << ',' << format_real(T.abs_T(cfg.s)) << ',' << r.count << ',' << r.candidates << ','
       << r.sieve_admitted << '\n';
    if (opts.dump_vectors) {
      const std::string name = "vectors_T" + std::to_string(k + 1) + ".csv";
      write_file(opts.out_dir / name, vector_dump(r.vectors, cfg.rank));
      out.files.push_back(name);
    }
  }
  write_file(opts.out_dir / "count.csv", os.str());
  out.files.insert(out.files.begin(), "count.csv");
  return out;
}

Outputs run_volume(const Config& cfg, const RunOptions& opts) {
  const auto q = build_form(cfg);
  std::ostringstream os;
  os << "# config_hash=" << cfg.hash << '\n';
  os << "# region=" << to_string(cfg.count.region) << " mc_samples=" << cfg.mc.samples
     << " mc_seed=" << cfg.mc.seed << '\n';
  os << t_columns(cfg.s) << ",absT,V_inf,V_inf_err";
  for (auto p : cfg.s.primes()) os << ",V_" << p;
  os << ",V,V_err,lambda_hat\n";
  for (const auto& T : cfg.schedule) {
    const auto v = total_volume(q, cfg.omega, cfg.I, T, cfg.count.region, cfg.mc);
    os << t_values(T) << ',' << format_real(T.abs_T(cfg.s)) << ',' << format_real(v.real) << ','
       << format_real(v.real_error);
    for (const auto& f : v.finite) os << ',' << to_string(f.value);
    os << ',' << format_real(v.total) << ',' << format_real(v.total_error) << ','
       << format_real(lambda_of(v, cfg.I, T, cfg.s, cfg.rank)) << '\n';
  }
  write_file(opts.out_dir / "volume.csv", os.str());
  return {{"volume.csv"}};
}

Outputs run_ratio(const Config& cfg, const RunOptions& opts) {
  const auto q = build_form(cfg);
  CountOptions co = cfg.count;
  co.keep_vectors = opts.dump_vectors;
  auto report = ratio_experiment(q, cfg.omega, cfg.I, cfg.schedule, cfg.mc, co);
  for (auto& note : form_notes(cfg, q)) report.notes.push_back(std::move(note));
  Outputs out{{"ratio.csv"}};
  write_file(opts.out_dir / "ratio.csv", report_csv(report, cfg.s, cfg.hash));
  if (opts.dump_vectors) {
    for (std::size_t k = 0; k < report.rows.size(); ++k) {
      const std::string name = "vectors_T" + std::to_string(k + 1) + ".csv";
      write_file(opts.out_dir / name, vector_dump(report.rows[k].count.vectors, cfg.rank));
      out.files.push_back(name);
    }
  }
  return out;
}

Outputs run_lemmas(const Config& cfg, const RunOptions& opts, std::ostream& err) {
  const auto rows = lemma_grid(cfg.seed);
  std::size_t failures = 0;
  for (const auto& row : rows) failures += row.pass ? 0 : 1;
  if (failures > 0) err << "lemmas: " << failures << " of " << rows.size() << " rows fail\n";
  write_file(opts.out_dir / "lemmas.csv", lemma_csv(rows));
  return {{"lemmas.csv"}};
}

Outputs run_alpha(const Config& cfg, const RunOptions& opts) {
  const SLattice lattice{cfg.s, cfg.basis};
  const auto a = alpha_lower(lattice, cfg.alpha_height);
  const auto f = siegel_transform(cfg.siegel, lattice, cfg.count.safety_cap);
  std::ostringstream os;
  os << "# config_hash=" << cfg.hash << '\n';
  os << "quantity,value\n";
  os << "alpha_hat," << format_real(a.alpha) << '\n';
  os << "witness_covolume," << format_real(a.covolume) << '\n';
  os << "witness_dimension," << a.dimension << '\n';
  for (std::size_t i = 0; i < a.witness.size(); ++i) {
    os << "witness_vector_" << i + 1 << ',' << format_vector(a.witness[i]) << '\n';
  }
  os << "subspaces_examined," << a.subspaces << '\n';
  os << "search_height," << cfg.alpha_height << '\n';
  os << "siegel_transform," << format_real(f.value) << '\n';
  os << "siegel_points," << f.points << '\n';
  os << "siegel_bound," << format_real(cfg.siegel.height * siegel_count_bound(cfg.siegel, lattice.dim()) * a.alpha)
     << '\n';
  write_file(opts.out_dir / "alpha.csv", os.str());
  return {{"alpha.csv"}};
}

void write_manifest(const Config& cfg, const std::string& cmd, const RunOptions& opts, const Outputs& out,
                    double seconds) {
  std::ostringstream os;
  os << "config_hash = " << cfg.hash << '\n';
  os << "version = " << tool_version() << '\n';
  os << "command = " << cmd << '\n';
  os << "workers = " << (opts.workers > 0 ? std::to_string(opts.workers) : "default") << '\n';
  os << "wall_time_seconds = " << seconds << '\n';
  for (const auto& f : out.files) os << "output = " << (opts.out_dir / f).string() << '\n';
  os << "[parameters]\n";
  for (const auto& [key, value] : cfg.effective) os << key << " = " << value << '\n';
  write_file(opts.out_dir / "manifest.txt", os.str());
}

}  // namespace

std::string tool_version() { return OPPENHEIM_VERSION; }

int run(const std::string& cmd, const Config& cfg, const RunOptions& opts, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  if (opts.workers > 0) omp_set_num_threads(opts.workers);
  std::filesystem::create_directories(opts.out_dir);
  Outputs out;
  try {
    if (cmd == "count") {
      out = run_count(cfg, opts);
    } else if (cmd == "volume") {
      out = run_volume(cfg, opts);
    } else if (cmd == "ratio") {
      out = run_ratio(cfg, opts);
    } else if (cmd == "lemmas") {
      out = run_lemmas(cfg, opts, err);
    } else if (cmd == "alpha") {
      out = run_alpha(cfg, opts);
    } else {
      err << "unknown command '" << cmd << "'\n";
      return kExitValidation;
    }
  } catch (const SafetyCapExceeded& e) {
    err << "refused: " << e.what() << '\n';
    return kExitSafetyCap;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(cfg, cmd, opts, out, seconds);
  return kExitOk;
}

int run_file(const std::string& cmd, const std::filesystem::path& config_path, const RunOptions& opts,
             std::ostream& err) {
  Config cfg;
  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ConfigurationError("cannot read config '" + config_path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    cfg = parse_config(text.str(), config_path.parent_path());
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitValidation;
  }
  return run(cmd, cfg, opts, err);
}

}  // namespace oppenheim
