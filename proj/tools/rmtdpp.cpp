// rmtdpp: distribution tables, moments, correlations and samplers.
//
//   rmtdpp dist --stat extreme-pdf --edge soft --grid -6:0.05:2
//   rmtdpp moments --stat spacing --edge soft
//   rmtdpp corr --edge hard --alpha 1
//   rmtdpp sample aztec --n 10 --seed 7
//
// Settings come from flags, then RMTDPP_<NAME> environment variables, then
// key=value lines of the --config file. Exit codes: 0 ok, 2 bad
// configuration, 3 numerical failure (nothing is written).

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmtdpp/airyproc.hpp"
#include "rmtdpp/aztec.hpp"
#include "rmtdpp/error.hpp"
#include "rmtdpp/numlin.hpp"
#include "rmtdpp/rmtstats.hpp"

using namespace rmtdpp;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_grid(const std::string& spec) {
  double a, h, b;
  char c1, c2;
  std::istringstream is(spec);
  if (!(is >> a >> c1 >> h >> c2 >> b) || c1 != ':' || c2 != ':' || !is.eof()) {
    throw ConfigError("grid must be start:step:stop, got '" + spec + "'");
  }
  if (!(h > 0.0) || !(b >= a) || !std::isfinite(a) || !std::isfinite(b)) throw ConfigError("empty grid '" + spec + "'");
  const auto count = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9)) + 1;
  if (count > 10000000) throw ConfigError("grid too large");
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = a + static_cast<double>(i) * h;
  return g;
}

struct Common {
  std::string stat, edge = "soft", format = "csv", out, grid;
  int alpha = 0;
  unsigned big_n = 0;
  std::size_t order = 0;
  double rtol = 1e-10;
  std::uint64_t seed = 0;
  bool timing = false;
};

EnsembleEdge make_edge(const Common& c) {
  if (c.edge == "soft") return EnsembleEdge::soft();
  if (c.edge == "hard") {
    if (c.alpha < 0) throw ConfigError("--alpha must be >= 0");
    return EnsembleEdge::hard(c.alpha);
  }
  if (c.edge == "bulk") return EnsembleEdge::bulk();
  if (c.edge == "gue") {
    if (c.big_n < 1) throw ConfigError("--edge gue needs --N >= 1");
    return EnsembleEdge::finite_gue(c.big_n);
  }
  throw ConfigError("unknown edge '" + c.edge + "'");
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  f << text;
}

json meta(const std::string& command, const Common& c) {
  json m;
  m["tool"] = "rmtdpp";
  m["version"] = RMTDPP_VERSION;
  m["command"] = command;
  if (!c.stat.empty()) m["stat"] = c.stat;
  m["edge"] = c.edge;
  m["alpha"] = c.alpha;
  m["N"] = c.big_n;
  m["order"] = c.order;
  m["rtol"] = c.rtol;
  if (!c.grid.empty()) m["grid"] = c.grid;
  return m;
}

std::string csv_header(const json& m) {
  std::string s = "#";
  for (auto it = m.begin(); it != m.end(); ++it) {
    s += ' ' + it.key() + '=';
    if (it->is_string()) {
      s += it->get<std::string>();
    } else if (it->is_number_float()) {
      s += g17(it->get<double>());
    } else {
      s += it->dump();
    }
  }
  return s + '\n';
}

PipelineOptions pipeline(const Common& c, std::size_t nodes) {
  PipelineOptions o;
  if (c.order) o.inner_order = c.order;
  if (nodes) o.grid = nodes;
  o.rtol = c.rtol;
  return o;
}

// ------------------------------------------------------------------- dist

int cmd_dist(const Common& c) {
  static const std::set<std::string> stats = {"extreme-cdf",   "extreme-pdf",  "second-cdf",  "second-pdf", "bulk-gap-ccdf",
                                              "bulk-gap-pdf",  "spacing-pdf",  "spacing-cdf", "joint-pdf"};
  if (!stats.count(c.stat)) throw ConfigError("unknown statistic '" + c.stat + "'");
  if (c.grid.empty()) throw ConfigError("--grid is required");
  if (c.format != "csv" && c.format != "json") throw ConfigError("--format must be csv or json");
  const auto xs = parse_grid(c.grid);
  const EnsembleEdge e = c.stat.rfind("bulk", 0) == 0 ? EnsembleEdge::bulk() : make_edge(c);
  const std::size_t m = c.order ? c.order : kStandaloneOrder;
  if (m < 2) throw ConfigError("--order must be >= 2");
  const PipelineOptions opt = pipeline(c, 0);

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<double>> rows;
  if (c.stat == "joint-pdf") {
    const std::size_t mj = c.order ? c.order : kInnerOrder;
    for (double x1 : xs) {
      for (double x2 : xs) {
        const double pts[2] = {x1, x2};
        rows.push_back({x1, x2, joint_pdf_extremes(e, pts, mj)});
      }
    }
  } else {
    for (double s : xs) {
      double v = 0.0;
      if (c.stat == "extreme-cdf") v = extreme_cdf(e, s, m);
      else if (c.stat == "extreme-pdf") v = extreme_pdf(e, s, m);
      else if (c.stat == "second-cdf") v = second_cdf(e, s, m);
      else if (c.stat == "second-pdf") v = second_pdf(e, s, m);
      else if (c.stat == "bulk-gap-ccdf") v = bulk_gap_ccdf(s, m);
      else if (c.stat == "bulk-gap-pdf") v = bulk_gap_pdf(s, m);
      else if (c.stat == "spacing-pdf") v = spacing_pdf(e, s, opt);
      else v = spacing_cdf(e, s, opt);
      rows.push_back({s, v});
    }
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!c.timing || c.format != "json") std::cerr << "rmtdpp: wall time " << secs << " s\n";
  const json md = meta("dist", c);
  std::string text;
  const bool joint = c.stat == "joint-pdf";
  if (c.format == "csv") {
    text = csv_header(md) + (joint ? "x1,x2,value\n" : "s,value\n");
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) text += (i ? "," : "") + g17(r[i]);
      text += '\n';
    }
  } else {
    json j;
    j["meta"] = md;
    if (c.timing) j["wall_time_s"] = secs;
    j["rows"] = json::array();
    for (const auto& r : rows) {
      if (joint) j["rows"].push_back({{"x1", r[0]}, {"x2", r[1]}, {"value", r[2]}});
      else j["rows"].push_back({{"s", r[0]}, {"value", r[1]}});
    }
    text = j.dump(1) + '\n';
  }
  emit(text, c.out);
  return 0;
}

// ---------------------------------------------------------- moments, corr

template <class F>
auto timed(const Common& c, const char* what, F&& f) {
  std::cerr << "rmtdpp: computing " << what << "...\n";
  const auto t0 = std::chrono::steady_clock::now();
  auto r = f();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!c.timing) std::cerr << "rmtdpp: wall time " << secs << " s\n";
  return std::make_pair(r, secs);
}

int cmd_moments(const Common& c, std::size_t nodes) {
  const PipelineOptions opt = pipeline(c, nodes);
  MomentSummary s;
  double secs = 0.0;
  if (c.stat == "bulk-gap") {
    std::tie(s, secs) = timed(c, "bulk gap moments", [&] { return bulk_gap_moments(opt); });
  } else if (c.stat == "extreme" || c.stat == "second" || c.stat == "spacing") {
    const EnsembleEdge e = make_edge(c);
    if (e.variant == EnsembleEdge::Variant::bulk) throw ConfigError("use --stat bulk-gap for the bulk");
    std::tie(s, secs) = timed(c, (c.stat + " moments").c_str(), [&] {
      if (c.stat == "extreme") return extreme_moments(e, opt);
      if (c.stat == "second") return second_moments(e, opt);
      return spacing_moments(e, opt);
    });
  } else {
    throw ConfigError("unknown statistic '" + c.stat + "' (extreme, second, bulk-gap, spacing)");
  }
  json j;
  j["meta"] = meta("moments", c);
  if (c.stat == "bulk-gap") j["meta"]["edge"] = "bulk";
  j["mean"] = s.mean;
  j["variance"] = s.variance;
  j["skewness"] = s.skewness;
  j["excess_kurtosis"] = s.excess_kurtosis;
  j["mass"] = s.mass;
  j["order_used"] = s.order_used;
  j["est_error"] = s.est_error;
  if (c.timing) j["wall_time_s"] = secs;
  emit(j.dump(1) + '\n', c.out);
  return 0;
}

int cmd_corr(const Common& c, std::size_t nodes) {
  const EnsembleEdge e = make_edge(c);
  if (e.variant != EnsembleEdge::Variant::soft && e.variant != EnsembleEdge::Variant::hard) {
    throw ConfigError("corr supports --edge soft or hard");
  }
  auto [r, secs] = timed(c, "correlation coefficient", [&] { return corr_coeff(e, pipeline(c, nodes)); });
  json j;
  j["meta"] = meta("corr", c);
  j["rho"] = r.rho;
  j["mean1"] = r.mean1;
  j["mean2"] = r.mean2;
  j["var1"] = r.var1;
  j["var2"] = r.var2;
  j["cross"] = r.cross;
  j["mass"] = r.mass;
  j["est_error"] = r.est_error;
  if (c.timing) j["wall_time_s"] = secs;
  emit(j.dump(1) + '\n', c.out);
  return 0;
}

// ------------------------------------------------------------------ sample

struct SampleArgs {
  std::string target;
  int n = 10;
  std::string times = "0:0.1:2";
  std::size_t cells = 150;
  double lo = -5.0, hi = 2.5;
  std::size_t count = 1;
};

int cmd_sample(Common c, const SampleArgs& a) {
  if (c.seed == 0) {
    std::random_device rd;
    c.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    if (c.seed == 0) c.seed = 1;
    std::cerr << "rmtdpp: seed=" << c.seed << '\n';
  }
  if (a.count < 1) throw ConfigError("--count must be >= 1");
  const Rng root(c.seed);
  json md = meta("sample", c);
  md.erase("stat");
  md.erase("edge");
  md.erase("alpha");
  md.erase("order");
  md.erase("rtol");
  if (a.target != "gue" && a.target != "dbm") md.erase("N");
  md["target"] = a.target;
  md["seed"] = c.seed;
  md["count"] = a.count;
  std::string text;

  if (a.target == "aztec" || a.target == "dr-path") {
    if (a.n < 1) throw ConfigError("--n must be >= 1");
    md["n"] = a.n;
    const AztecKernel k(a.n);
    if (a.target == "aztec") {
      if (c.format == "csv") c.format = "text";
      if (c.format != "text" && c.format != "json") throw ConfigError("aztec output is text or json");
      json all = json::array();
      for (std::size_t i = 0; i < a.count; ++i) {
        Rng rng = root.split(i + 1);
        const Tiling t = sample_tiling(k, rng);
        if (c.format == "text") {
          text += csv_header(md) + tiling_text(t);
        } else {
          all.push_back(json::parse(tiling_json(t)));
        }
      }
      if (c.format == "json") text = json{{"meta", md}, {"tilings", all}}.dump(1) + '\n';
    } else {
      json all = json::array();
      for (std::size_t i = 0; i < a.count; ++i) {
        Rng rng = root.split(i + 1);
        all.push_back(json::parse(path_json(sample_top_dr_path(k, rng))));
      }
      text = json{{"meta", md}, {"paths", all}}.dump(1) + '\n';
    }
  } else if (a.target == "airy-process" || a.target == "dbm") {
    const auto ts = parse_grid(a.times);
    md["t"] = a.times;
    std::vector<ProcessPath> paths;
    if (a.target == "airy-process") {
      md["cells"] = a.cells;
      md["lo"] = a.lo;
      md["hi"] = a.hi;
      const MultitimeGrid g(ts, a.lo, a.hi, a.cells);
      const RealMatrix k = build_block_kernel(g);
      for (std::size_t i = 0; i < a.count; ++i) {
        Rng rng = root.split(i + 1);
        paths.push_back(sample_airy_path(g, k, rng));
      }
    } else {
      if (c.big_n < 2) throw ConfigError("dbm needs --N >= 2");
      for (std::size_t i = 0; i < a.count; ++i) {
        Rng rng = root.split(i + 1);
        paths.push_back(simulate_dbm(c.big_n, ts, rng));
      }
    }
    if (c.format == "json") {
      json all = json::array();
      for (const auto& p : paths) all.push_back({{"t", p.times}, {"value", p.values}});
      text = json{{"meta", md}, {"paths", all}}.dump(1) + '\n';
    } else {
      text = csv_header(md);
      for (std::size_t i = 0; i < paths.size(); ++i) {
        if (paths.size() > 1) text += "# path=" + std::to_string(i) + '\n';
        text += path_csv(paths[i], c.seed);
      }
    }
  } else if (a.target == "gue") {
    if (c.big_n < 1) throw ConfigError("gue needs --N >= 1");
    const std::size_t n = c.big_n;
    text = csv_header(md) + "sample,eigenvalue\n";
    json all = json::array();
    for (std::size_t s = 0; s < a.count; ++s) {
      Rng rng = root.split(s + 1);
      // Density proportional to exp(-tr H^2).
      ComplexMatrix h(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = rng.normal() * std::sqrt(0.5);
        for (std::size_t j = 0; j < i; ++j) {
          const double re = rng.normal() * 0.5, im = rng.normal() * 0.5;
          h(i, j) = {re, im};
          h(j, i) = {re, -im};
        }
      }
      const auto ev = herm_eigenvalues(h);
      for (double v : ev) text += std::to_string(s) + ',' + g17(v) + '\n';
      all.push_back(ev);
    }
    if (c.format == "json") text = json{{"meta", md}, {"eigenvalues", all}}.dump(1) + '\n';
  } else {
    throw ConfigError("unknown sample target '" + a.target + "' (gue, aztec, dr-path, airy-process, dbm)");
  }
  emit(text, c.out);
  return 0;
}

// --------------------------------------------------------------- layering

std::map<std::string, std::string> read_config(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::string line;
  while (std::getline(f, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line without '=': " + line);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Appends --name=value for options of `sub` that the command line leaves
// unset, taking RMTDPP_<NAME> first and the config file second.
std::vector<std::string> layered_args(const std::vector<std::string>& args, const CLI::App& sub) {
  std::set<std::string> given;
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].rfind("--", 0) != 0) continue;
    const auto eq = args[i].find('=');
    const std::string name = args[i].substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    given.insert(name);
    if (name == "config") config = eq != std::string::npos ? args[i].substr(eq + 1) : (i + 1 < args.size() ? args[i + 1] : "");
  }
  if (config.empty()) {
    if (const char* v = std::getenv("RMTDPP_CONFIG")) config = v;
  }
  std::map<std::string, std::string> file;
  if (!config.empty()) file = read_config(config);
  for (const auto& [k, v] : file) {
    if (!sub.get_option_no_throw("--" + k)) throw ConfigError("unknown key '" + k + "' in config file");
  }

  std::vector<std::string> out = args;
  for (const CLI::Option* opt : sub.get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty()) continue;
    const std::string& name = names.front();
    if (name == "help" || name == "config" || given.count(name)) continue;
    std::string env = "RMTDPP_" + name;
    for (char& ch : env) ch = ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (const char* v = std::getenv(env.c_str())) {
      out.push_back("--" + name + "=" + v);
    } else if (auto it = file.find(name); it != file.end()) {
      out.push_back("--" + name + "=" + it->second);
    }
  }
  return out;
}

void add_common(CLI::App* s, Common& c, bool stats) {
  s->add_option("--config", "key=value configuration file");
  s->add_option("--format", c.format, "csv or json (text or json for aztec tilings)");
  s->add_option("--out", c.out, "output file (stdout when omitted)");
  s->add_option("--N", c.big_n, "matrix size (finite GUE, dbm, gue)");
  s->add_option("--seed", c.seed, "seed; 0 draws one from the system and prints it");
  if (!stats) return;
  s->add_option("--stat", c.stat, "statistic");
  s->add_option("--edge", c.edge, "soft, hard, bulk or gue");
  s->add_option("--alpha", c.alpha, "hard-edge parameter");
  s->add_option("--order", c.order, "quadrature order (0: library default)");
  s->add_option("--rtol", c.rtol, "relative tolerance");
  s->add_flag("--timing", c.timing, "include wall time in the JSON output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Determinantal point process samplers and random-matrix statistics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(RMTDPP_VERSION));

  Common c;
  std::size_t nodes = 0;
  SampleArgs sa;

  auto* dist = app.add_subcommand("dist", "tabulate a distribution on a grid");
  add_common(dist, c, true);
  dist->add_option("--grid", c.grid, "start:step:stop");

  auto* mom = app.add_subcommand("moments", "mean, variance, skewness, excess kurtosis");
  add_common(mom, c, true);
  mom->add_option("--nodes", nodes, "per-axis nodes of the 2-D rule (spacing)");

  auto* corr = app.add_subcommand("corr", "correlation of the two extreme eigenvalues");
  add_common(corr, c, true);
  corr->add_option("--nodes", nodes, "per-axis nodes of the 2-D rule");

  auto* smp = app.add_subcommand("sample", "draw samples");
  add_common(smp, c, false);
  smp->add_option("target", sa.target, "gue, aztec, dr-path, airy-process or dbm")->required();
  smp->add_option("--n", sa.n, "Aztec diamond order");
  smp->add_option("--t", sa.times, "times start:step:stop (airy-process, dbm)");
  smp->add_option("--grid", sa.cells, "cells per time block (airy-process)");
  smp->add_option("--lo", sa.lo, "lower end of the space window");
  smp->add_option("--hi", sa.hi, "upper end of the space window");
  smp->add_option("--count", sa.count, "number of independent samples");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    const CLI::App* sub = nullptr;
    for (const std::string& a : args) {
      if (a.rfind("-", 0) == 0) continue;
      for (const CLI::App* s : {dist, mom, corr, smp})
        if (s->get_name() == a) sub = s;
      break;
    }
    if (sub) args = layered_args(args, *sub);
    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (c.order == 1) throw ConfigError("--order must be >= 2");
    if (*dist) return cmd_dist(c);
    if (*mom) return cmd_moments(c, nodes);
    if (*corr) return cmd_corr(c, nodes);
    if (*smp) {
      if (c.big_n == 0) c.big_n = sa.target == "dbm" ? 200 : 10;
      return cmd_sample(c, sa);
    }
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "rmtdpp: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NoConvergence& e) {
    std::cerr << "rmtdpp: " << e.what() << " (best " << e.best_value() << " at order " << e.order_used() << ")\n";
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "rmtdpp: " << e.what() << '\n';
    switch (e.code()) {
      case Errc::invalid_argument:
      case Errc::unsupported_variant:
      case Errc::unsupported_order:
        return kExitConfig;
      default:
        return kExitNumeric;
    }
  }
  return 0;
}
