#include "jpit/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "jpit/calculus.hpp"
#include "jpit/circuit.hpp"
#include "jpit/errors.hpp"
#include "jpit/gens.hpp"
#include "jpit/immlab.hpp"
#include "jpit/oracle.hpp"
#include "json.hpp"

namespace jpit {

namespace {

using nlohmann::json;

struct Config {
  std::uint64_t seed = 1;
  std::uint64_t modulus = 0;  // 0: circuit header, then env, then default
  std::string output;
  std::string format = "jsonl";
  bool timing = true;
};

// Generator flags; unset ones fall back to --params, then derived defaults.
struct ParamFlags {
  std::string params;  // inline JSON or @file
  std::optional<std::size_t> n, m, r, k, D;
  std::optional<std::uint64_t> s, d, c_degree, degree, p_max, cap;

  void add(CLI::App* app) {
    app->add_option("--params", params, "generator parameters as JSON, or @file");
    app->add_option("--n", n, "number of variables");
    app->add_option("--s", s, "size bound");
    app->add_option("--d", d, "degree of each T_i (theorem 1)");
    app->add_option("--m", m, "number of T_i / top fanin bound");
    app->add_option("--r", r, "trdeg bound (theorem 1)");
    app->add_option("--k", k, "occur bound");
    app->add_option("--D", D, "depth (theorem 2)");
    app->add_option("--c-degree", c_degree, "degree of the outer circuit C (theorem 1)");
    app->add_option("--degree", degree, "degree of the tested polynomial (theorems 2, 3)");
    app->add_option("--p-max", p_max, "largest Kronecker modulus tried (theorems 2, 3)");
    app->add_option("--cap", cap, "largest hitting set size allowed");
  }

  GeneratorParams resolve(GeneratorParams base) const {
    if (!params.empty()) {
      json j;
      if (params[0] == '@') {
        std::ifstream in(params.substr(1));
        if (!in) throw PreconditionError("cannot read params file " + params.substr(1));
        j = json::parse(in);
      } else {
        j = json::parse(params);
      }
      json merged = to_json(base);
      merged.update(j);
      base = generator_params_from_json(merged);
    }
    if (n) base.n = *n;
    if (s) base.s = *s;
    if (d) base.d = *d;
    if (m) base.m = *m;
    if (r) base.r = *r;
    if (k) base.k = *k;
    if (D) base.D = *D;
    if (c_degree) base.c_degree = *c_degree;
    if (degree) base.degree = *degree;
    if (p_max) base.p_max = *p_max;
    if (cap) base.cap = *cap;
    return base;
  }
};

std::uint64_t env_modulus() {
  const char* v = std::getenv(kModulusEnv);
  if (v == nullptr || *v == '\0') return 0;
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw PreconditionError(std::string(kModulusEnv) + " is not a number: " + v);
  }
}

PrimeField default_field(const Config& cfg) {
  if (cfg.modulus != 0) return PrimeField(cfg.modulus);
  if (std::uint64_t p = env_modulus()) return PrimeField(p);
  return select_prime(1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Circuit load_circuit(const std::string& path, const Config& cfg) {
  std::string text = read_file(path);
  try {
    if (cfg.modulus != 0) return parse_circuit(text, PrimeField(cfg.modulus));
    static const std::regex header(R"(\(\s*field\s)");
    if (!std::regex_search(text, header)) {
      if (std::uint64_t p = env_modulus()) return parse_circuit(text, PrimeField(p));
    }
    return parse_circuit(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.message(), e.line(), e.column());
  }
}

json header(const char* command, const PrimeField& f, const Config& cfg, json params) {
  return {{"version", kVersion},
          {"command", command},
          {"field", f.modulus()},
          {"seed", cfg.seed},
          {"params", std::move(params)}};
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt_ms(double ms) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(3);
  s << ms;
  return s.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

// Rows of one table, written as CSV (JSON header behind '# ') or JSONL.
class Table {
 public:
  Table(std::ostream& os, const Config& cfg, const json& head, std::vector<std::string> columns)
      : os_(os), csv_(cfg.format == "csv"), timing_(cfg.timing), columns_(std::move(columns)) {
    if (timing_) columns_.push_back("ms");
    if (csv_) {
      os_ << "# " << head.dump() << '\n';
      for (std::size_t i = 0; i < columns_.size(); ++i) os_ << (i ? "," : "") << columns_[i];
      os_ << '\n';
    } else {
      os_ << head.dump() << '\n';
    }
  }

  void row(std::vector<json> values, double ms) {
    if (timing_) values.emplace_back(fmt_ms(ms));
    if (csv_) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        const json& v = values[i];
        os_ << (i ? "," : "") << csv_field(v.is_string() ? v.get<std::string>() : v.dump());
      }
      os_ << '\n';
      return;
    }
    json line = json::object();
    for (std::size_t i = 0; i < values.size(); ++i) line[columns_[i]] = values[i];
    os_ << line.dump() << '\n';
  }

 private:
  std::ostream& os_;
  bool csv_;
  bool timing_;
  std::vector<std::string> columns_;
};

Character builtin_character(const std::string& name, std::size_t n) {
  if (name == "sign") return Character::sign(n);
  if (name == "trivial") return Character::trivial(n);
  throw PreconditionError("character must be sign or trivial, got '" + name + "'");
}

// ---- pit ----

struct PitArgs {
  std::string file;
  std::string method = "sz";
  std::size_t trials = kDefaultTrials;
  ParamFlags flags;
};

GeneratorParams derived_params(const Circuit& c, const std::string& method) {
  auto prof = analyze(c);
  GeneratorParams p;
  p.n = c.nvars();
  p.s = std::max<std::uint64_t>(1, prof.size);
  p.degree = std::max<std::uint64_t>(1, prof.syntactic_degree);
  if (method == "thm1") {
    // Every circuit is C(x_1..x_n) with T_i = x_i.
    p.d = 1;
    p.m = c.nvars();
    p.r = c.nvars();
    p.c_degree = p.degree;
  } else {
    p.k = std::max<std::uint64_t>(1, validate_occur_k(c, 1).max_occur);
    p.D = std::max<std::uint64_t>(3, prof.depth);
    p.m = std::max<std::uint64_t>(1, prof.top_fanin);
  }
  return p;
}

int run_pit(const PitArgs& a, const Config& cfg, std::ostream& out) {
  if (cfg.format != "jsonl") throw PreconditionError("pit writes JSONL only");
  Circuit c = load_circuit(a.file, cfg);
  const auto& f = c.field();
  json params = {{"file", a.file}, {"method", a.method}};
  json result;
  bool zero = false;
  if (a.method == "sz") {
    params["trials"] = a.trials;
    Rng rng(cfg.seed);
    Verdict v = sz_random_test(c, rng, a.trials);
    zero = v.is_zero();
    result = {{"verdict", zero ? "zero" : "nonzero"}, {"method", "sz"}, {"trials", v.trials}};
    if (v.witness_point) result["witness"] = *v.witness_point;
    if (zero) result["error_bound"] = v.error_bound;
  } else {
    int theorem = a.method == "thm1" ? 1 : a.method == "thm2" ? 2 : a.method == "thm3" ? 3 : 0;
    if (theorem == 0) throw PreconditionError("unknown method '" + a.method + "'");
    GeneratorParams gp = a.flags.resolve(derived_params(c, a.method));
    if (gp.n != c.nvars()) {
      throw ArityError("--n " + std::to_string(gp.n) + " differs from the circuit's " +
                       std::to_string(c.nvars()) + " variables");
    }
    params["generator"] = to_json(gp);
    auto stream = make_generator(theorem, f, gp);
    Evaluator ev(c);
    auto res = blackbox_test([&](std::span<const std::uint64_t> x) { return ev(x); }, stream);
    zero = res.all_zero;
    result = {{"verdict", zero ? "zero" : "nonzero"},
              {"method", a.method},
              {"declared_size", stream.declared_size()},
              {"points_checked", res.points_checked}};
    if (res.witness) {
      result["witness"] = res.witness->coords;
      result["witness_index"] = res.witness_index;
      result["value"] = f.to_signed(res.value);
      result["provenance"] = provenance_json(*res.witness);
    }
  }
  if (zero) result["message"] = "all points zero";
  out << header("pit", f, cfg, params).dump() << '\n' << result.dump() << '\n';
  return zero ? 2 : 0;
}

// ---- trdeg ----

struct TrdegArgs {
  std::vector<std::string> files;
  std::size_t trials = kDefaultTrials;
};

int run_trdeg(const TrdegArgs& a, const Config& cfg, std::ostream& out) {
  if (cfg.format != "jsonl") throw PreconditionError("trdeg writes JSONL only");
  std::vector<Circuit> cs;
  for (const auto& file : a.files) {
    cs.push_back(load_circuit(file, cfg));
    if (cs.back().field() != cs.front().field()) throw FieldMismatch(file + " is over a different field");
    if (cs.back().nvars() != cs.front().nvars()) throw ArityError(file + " has a different variable count");
  }
  auto report = trdeg(cs, Rng(cfg.seed), a.trials);
  json params = {{"files", a.files}, {"trials", a.trials}};
  out << header("trdeg", cs.front().field(), cfg, params).dump() << '\n' << to_json(report).dump() << '\n';
  return 0;
}

// ---- gen ----

struct GenArgs {
  int theorem = 1;
  std::uint64_t limit = 0;
  ParamFlags flags;
};

int run_gen(const GenArgs& a, const Config& cfg, std::ostream& out) {
  PrimeField f = default_field(cfg);
  GeneratorParams gp = a.flags.resolve(GeneratorParams{});
  // Only a prefix is wanted, so an oversized stream is cut at the cap.
  if (a.limit > 0) gp.truncate = true;
  auto stream = make_generator(a.theorem, f, gp);
  json params = {{"theorem", a.theorem}, {"limit", a.limit}, {"generator", to_json(gp)}};
  json head = header("gen", f, cfg, params);
  head["declared_size"] = stream.declared_size();
  head["descriptor"] = stream.descriptor();
  if (cfg.format == "jsonl") {
    write_stream_jsonl(out, stream, head, a.limit);
    return 0;
  }
  out << "# " << head.dump() << "\nindex,block,candidate,lattice_index,shift";
  for (std::size_t i = 1; i <= stream.nvars(); ++i) out << ",x" << i;
  out << '\n';
  auto cur = stream.cursor();
  Point p;
  for (std::uint64_t i = 0; (a.limit == 0 || i < a.limit) && cur.next(p); ++i) {
    out << i << ',' << p.block << ',' << p.candidate << ',' << p.lattice_index << ',' << p.shift;
    for (auto v : p.coords) out << ',' << v;
    out << '\n';
  }
  return 0;
}

// ---- lab ----

struct LabArgs {
  std::string experiment;
  std::size_t n = 3;
  std::size_t r = 1;
  std::size_t k = 3;
  std::size_t t = 2;
  std::optional<std::size_t> c;
  std::size_t instances = 10;
  std::string chi = "sign";
  std::string values = "0,1";
};

int run_lab(const LabArgs& a, const Config& cfg, std::ostream& out) {
  PrimeField f = default_field(cfg);
  Rng rng(cfg.seed);
  json params = {{"experiment", a.experiment}, {"n", a.n}, {"chi", a.chi}};
  if (a.experiment == "lemma10") {
    params["r"] = a.r;
    params["instances"] = a.instances;
    Table tab(out, cfg, header("lab", f, cfg, params),
              {"index", "n", "r", "kind", "chi", "trdeg", "terms", "nonzero_f", "verdict"});
    const Character chi = builtin_character(a.chi, a.n);
    for (std::size_t i = 0; i < a.instances; ++i) {
      Timer timer;
      Rng ri = rng.split(i);
      int kind = static_cast<int>(i % 2);
      auto inst = dependent_set(f, a.n, a.r, kind, chi, ri);
      auto eq = lemma10_equation(inst.Ts, chi, rng.split(1000 + i));
      std::size_t nonzero_f = 0;
      for (const auto& term : eq.terms) nonzero_f += !term.f.is_zero();
      bool ok = eq.sum().is_zero() && nonzero_f > 0;
      tab.row({i, a.n, a.r, kind, a.chi, eq.r, eq.terms.size(), nonzero_f, ok ? "zero" : "nonzero"},
              timer.ms());
    }
    return 0;
  }
  if (a.experiment == "conjecture1") {
    params["k"] = a.k;
    params["t"] = a.t;
    Table tab(out, cfg, header("lab", f, cfg, params), {"index", "n", "partition", "y", "verdict", "flagged"});
    Timer timer;
    auto cases = conjecture1_sweep(f, a.n, a.k, a.t, builtin_character(a.chi, a.n), rng);
    double each = cases.empty() ? 0.0 : timer.ms() / static_cast<double>(cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto& cs = cases[i];
      tab.row({i, cs.n, json(cs.partition).dump(), json(cs.y).dump(), cs.verdict, !cs.verdict}, each);
    }
    return 0;
  }
  if (a.experiment == "projection") {
    std::vector<std::uint64_t> values;
    std::stringstream ss(a.values);
    for (std::string item; std::getline(ss, item, ',');) values.push_back(f.from_int(std::stoll(item)));
    std::size_t c_max = a.c.value_or(a.n - 1);
    params["c"] = c_max;
    params["values"] = a.values;
    Table tab(out, cfg, header("lab", f, cfg, params),
              {"n", "c", "chi", "checked", "counterexamples", "verdict"});
    for (std::size_t c = 0; c <= c_max; ++c) {
      Timer timer;
      auto sw = projection_sweep(f, a.n, c, values, builtin_character(a.chi, a.n), rng.split(c));
      tab.row({a.n, c, a.chi, sw.checked, sw.counterexamples.size(),
               sw.counterexamples.empty() ? "nonzero" : "zero_found"},
              timer.ms());
    }
    return 0;
  }
  throw PreconditionError("unknown experiment '" + a.experiment + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jacobian-based blackbox identity testing"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--modulus", cfg.modulus, "prime field modulus (default: circuit header, then $" +
                                              std::string(kModulusEnv) + ", then a prime above 2^50)");
  app.add_option("-o,--output", cfg.output, "write to this file instead of stdout");
  app.add_option("--format", cfg.format, "jsonl or csv")
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();
  app.add_flag("!--no-timing", cfg.timing, "omit the timing column from lab output");
  app.set_version_flag("--version", kVersion);

  PitArgs pit;
  auto* pit_cmd = app.add_subcommand("pit", "identity test a circuit file");
  pit_cmd->add_option("file", pit.file, "circuit file")->required();
  pit_cmd->add_option("--method", pit.method, "sz, thm1, thm2 or thm3")
      ->check(CLI::IsMember({"sz", "thm1", "thm2", "thm3"}))
      ->capture_default_str();
  pit_cmd->add_option("--trials", pit.trials, "random points for sz")->capture_default_str();
  pit.flags.add(pit_cmd);

  TrdegArgs td;
  auto* td_cmd = app.add_subcommand("trdeg", "transcendence degree of circuit files");
  td_cmd->add_option("files", td.files, "circuit files")->required();
  td_cmd->add_option("--trials", td.trials, "random points")->capture_default_str();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "stream hitting set points");
  gen_cmd->add_option("--theorem", gen.theorem, "1, 2 or 3")->required()->check(CLI::Range(1, 3));
  gen_cmd->add_option("--limit", gen.limit, "stop after this many points (0: all)");
  gen.flags.add(gen_cmd);

  LabArgs lab;
  auto* lab_cmd = app.add_subcommand("lab", "immanant experiments");
  lab_cmd->add_option("experiment", lab.experiment, "lemma10, conjecture1 or projection")
      ->required()
      ->check(CLI::IsMember({"lemma10", "conjecture1", "projection"}));
  lab_cmd->add_option("--n", lab.n, "matrix order (largest order for sweeps)")->capture_default_str();
  lab_cmd->add_option("--r", lab.r, "trdeg of the sets (lemma10)")->capture_default_str();
  lab_cmd->add_option("--k", lab.k, "largest k (conjecture1)")->capture_default_str();
  lab_cmd->add_option("--t", lab.t, "largest number of partition sets (conjecture1)")->capture_default_str();
  lab_cmd->add_option("--c", lab.c, "largest number of constant entries (projection; default n-1)");
  lab_cmd->add_option("--instances", lab.instances, "instances (lemma10)")->capture_default_str();
  lab_cmd->add_option("--chi", lab.chi, "sign or trivial")->capture_default_str();
  lab_cmd->add_option("--values", lab.values, "constant values (projection)")->capture_default_str();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    std::ofstream file;
    if (!cfg.output.empty()) {
      file.open(cfg.output);
      if (!file) throw PreconditionError("cannot write " + cfg.output);
    }
    std::ostream& os = cfg.output.empty() ? out : file;
    if (*pit_cmd) return run_pit(pit, cfg, os);
    if (*td_cmd) return run_trdeg(td, cfg, os);
    if (*gen_cmd) return run_gen(gen, cfg, os);
    return run_lab(lab, cfg, os);
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "; raise --cap or tighten the bounds (--p-max, --n, --s, ...)\n";
  } catch (const ParseError& e) {
    err << "error: malformed circuit: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace jpit
