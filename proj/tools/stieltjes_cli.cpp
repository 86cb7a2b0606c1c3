// stieltjes: command-line front end.
//
//   eval      density value and metadata (JSON)
//   moments   moment checks (CSV with --table, JSON otherwise)
//   criteria  Carleman / Krein / converse-Carleman report
//   class     Stieltjes class members on an x-grid, or the TM2 gamma bound
//   convolve  Mellin convolution of two principal solutions
//
// Exit codes: 0 ok, 1 usage or constraint error, 2 undecided criteria,
// 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "report_json.hpp"
#include "stieltjes.hpp"

using namespace stieltjes;
using nlohmann::json;

namespace {

enum Exit { Ok = 0, Usage = 1, Undecided = 2, Numeric = 3 };

struct ContourFlags {
  std::optional<double> c, t_max;
  std::optional<int> n;
  bool any() const { return c || t_max || n; }
};

struct GridFlags {
  std::optional<double> x_min, x_max;
  int points = 200;
};

struct Config {
  std::string seq;
  std::string solution = "principal";
  std::optional<int> k;
  std::optional<double> eps, gamma;
  std::vector<double> x;
  std::string n_range = "0..8";
  bool table = false;
  bool json_out = false;
  bool all_terms = false;
  int n_max = 2000;
  std::string emit = "csv";
  bool find_gamma_max = false;
  std::uint64_t mc_seed = GammaSearchOptions{}.mc_seed;
  std::string f, g;
  std::string output;
  ContourFlags contour;
  GridFlags grid;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::vector<int> parse_range(const std::string &text) {
  std::vector<int> out;
  try {
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
      const int a = std::stoi(text.substr(0, dots)), b = std::stoi(text.substr(dots + 2));
      if (a < 0 || b < a)
        throw ParseError("bad range");
      for (int n = a; n <= b; ++n)
        out.push_back(n);
      return out;
    }
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
      out.push_back(std::stoi(item));
      if (out.back() < 0)
        throw ParseError("bad range");
    }
  } catch (const std::logic_error &) {
    throw ParseError("--n expects 'a..b' or a comma list of nonnegative integers, got '" + text + "'");
  }
  if (out.empty())
    throw ParseError("--n is empty");
  return out;
}

Family family_of(const MomentSequence &seq) {
  switch (seq.kind()) {
  case SequenceKind::TM1: return Family::TM1;
  case SequenceKind::TM2: return Family::TM2;
  case SequenceKind::TM3: return Family::TM3;
  default: break;
  }
  throw ConstraintError("class members exist for tm1, tm2 and tm3 sequences only");
}

StieltjesClassMember make_member(const MomentSequence &seq, const Config &cfg) {
  if (!cfg.k)
    throw ConstraintError("class members need --k");
  const int r = seq.r(), k = *cfg.k;
  switch (family_of(seq)) {
  case Family::TM1:
    if (!cfg.eps)
      throw ConstraintError("tm1 class members need --eps with |eps| < 1");
    return StieltjesClassMember::tm1(r, k, *cfg.eps);
  case Family::TM2:
    if (!cfg.gamma)
      throw ConstraintError("tm2 class members need --gamma with |gamma| <= gamma_max");
    return StieltjesClassMember::tm2(r, k, *cfg.gamma);
  case Family::TM3:
    if (!cfg.gamma)
      throw ConstraintError("tm3 class members need --gamma with |gamma| < 1");
    return StieltjesClassMember::tm3(r, k, *cfg.gamma);
  }
  throw ConstraintError("unsupported family");
}

// Density selected by --solution, as a WeightFunction. Contour flags replace
// the saddle-point contour by a fixed user line.
WeightFunction make_density(const MomentSequence &seq, const Config &cfg) {
  if (cfg.solution == "class-member") {
    auto member = std::make_shared<StieltjesClassMember>(make_member(seq, cfg));
    const auto &base = member->base();
    return {base.name() + "~", seq, [member](double x) { return std::log(member->evaluate(x)); }, base.alpha0(),
            base.growth(), base.representation()};
  }
  if (cfg.solution != "principal")
    throw ParseError("--solution must be 'principal' or 'class-member'");
  if (!cfg.contour.any())
    return principal_solution(seq);

  ContourSpec spec = default_contour(seq);
  if (cfg.contour.c)
    spec.c = *cfg.contour.c;
  if (cfg.contour.t_max)
    spec.t_max = *cfg.contour.t_max;
  if (cfg.contour.n)
    spec.n_points = *cfg.contour.n;
  if (!(spec.c > seq.rightmost_pole()))
    throw ConstraintError("--contour-c must satisfy c > " + fmt(seq.rightmost_pole()) +
                          " (right of every pole)");
  auto log_w = [seq, spec](double x) {
    const auto v = inverse_mellin_scaled([&](Complex s) { return mellin_symbol(seq, s); }, x, spec);
    if (!(v.mantissa > 0.0))
      throw NumericError("contour evaluation returned a non-positive density; adjust the contour flags");
    return v.log_abs();
  };
  return {"W", seq, log_w, principal_alpha0(seq), principal_growth(seq), Representation::MellinBarnes};
}

// 200 log-spaced points from 1e-4 to where W falls below 1e-300 of its peak.
std::vector<double> make_grid(const WeightFunction &w, const GridFlags &gf) {
  const double lo = gf.x_min.value_or(1e-4);
  double hi = 0.0;
  if (gf.x_max) {
    hi = *gf.x_max;
  } else {
    const double drop = 300.0 * std::log(10.0);
    double peak = -std::numeric_limits<double>::infinity();
    double lx = std::log(lo);
    for (int j = 0; j < 4000; ++j, lx += 0.25) {
      const double v = w.log_evaluate(std::exp(lx));
      peak = std::max(peak, v);
      if (v < peak - drop)
        break;
    }
    hi = std::exp(lx);
  }
  if (!(lo > 0.0 && hi > lo) || gf.points < 2)
    throw ParseError("x-grid needs 0 < x-min < x-max and at least 2 points");
  std::vector<double> xs(gf.points);
  const double a = std::log(lo), b = std::log(hi);
  for (int j = 0; j < gf.points; ++j)
    xs[j] = std::exp(a + (b - a) * j / (gf.points - 1));
  return xs;
}

json thin_terms(const CriterionReport &rep, json j) {
  // keep about 40 log-spaced terms plus the last one
  json kept = json::array();
  int next = 1;
  for (const auto &[n, a] : rep.c1.terms) {
    if (n >= next || n == rep.c1.terms.back().first) {
      kept.push_back({n, a});
      next = std::max(n + 1, static_cast<int>(std::ceil(n * 1.2)));
    }
  }
  j["c1"]["terms"] = kept;
  return j;
}

int run_eval(const Config &cfg, std::ostream &out) {
  const auto seq = parse_sequence(cfg.seq);
  const auto w = make_density(seq, cfg);
  if (cfg.x.empty())
    throw ParseError("eval needs --x");
  json values = json::array();
  for (double x : cfg.x) {
    const double lv = w.log_evaluate(x);
    values.push_back({{"x", x}, {"value", io::number(std::exp(lv))}, {"log_value", io::number(lv)}});
  }
  json j = {{"schema_version", io::schema_version},
            {"kind", "density"},
            {"sequence", describe(seq)},
            {"solution", cfg.solution},
            {"name", w.name()},
            {"representation", io::to_string(w.representation())},
            {"alpha0", w.alpha0()},
            {"growth", {{"g", w.growth().g}, {"p", w.growth().p}}},
            {"values", values}};
  out << j.dump(2) << '\n';
  return Ok;
}

int run_moments(const Config &cfg, std::ostream &out) {
  const auto seq = parse_sequence(cfg.seq);
  const auto w = make_density(seq, cfg);
  const auto ns = parse_range(cfg.n_range);
  const auto results = detail::parallel_map(ns, [&](int n) { return check_moment(w, seq, n); });
  if (cfg.table) {
    out << "n,log_integral,log_target,rel_error,nodes_used\n";
    for (const auto &m : results)
      out << m.n << ',' << fmt(m.log_integral) << ',' << fmt(m.log_target) << ',' << fmt(m.rel_error) << ','
          << m.nodes_used << '\n';
    return Ok;
  }
  json rows = json::array();
  for (const auto &m : results)
    rows.push_back(io::to_json(m));
  out << json{{"schema_version", io::schema_version},
              {"kind", "moment_checks"},
              {"sequence", describe(seq)},
              {"solution", w.name()},
              {"checks", rows}}
             .dump(2)
      << '\n';
  return Ok;
}

int run_criteria(const Config &cfg, std::ostream &out) {
  const auto seq = parse_sequence(cfg.seq);
  const auto w = make_density(seq, cfg);
  CriteriaOptions opt;
  opt.n_max = cfg.n_max;
  const auto rep = full_report(seq, w, opt);
  if (cfg.json_out) {
    auto j = io::to_json(rep);
    out << (cfg.all_terms ? j : thin_terms(rep, j)).dump(2) << '\n';
  } else {
    out << "sequence  " << rep.sequence << " (" << rep.solution << ")\n"
        << "C1        " << to_string(rep.c1.verdict) << "  decay exponent " << fmt(rep.c1.fitted_decay_exponent);
    if (rep.c1.limit_n_an)
      out << "  lim n a_n " << fmt(*rep.c1.limit_n_an);
    out << "\nC2        " << to_string(rep.c2.verdict) << "  beta " << fmt(rep.c2.growth_exponent) << "  integral "
        << fmt(rep.c2.integral_estimate) << "\nC3        " << to_string(rep.c3.verdict) << "  y' "
        << fmt(rep.c3.y_prime) << "  margin " << fmt(rep.c3.convexity_margin) << "\noverall   "
        << to_string(rep.overall) << '\n';
  }
  return rep.overall == Overall::Undecided ? Undecided : Ok;
}

int run_class(const Config &cfg, std::ostream &out) {
  const auto seq = parse_sequence(cfg.seq);
  if (cfg.find_gamma_max) {
    if (seq.kind() != SequenceKind::TM2)
      throw ConstraintError("--find-gamma-max applies to tm2 sequences");
    if (!cfg.k)
      throw ConstraintError("--find-gamma-max needs --k");
    GammaSearchOptions opt;
    opt.mc_seed = cfg.mc_seed;
    out << io::to_json(find_gamma_max(seq.r(), *cfg.k, opt), seq.r(), *cfg.k).dump(2) << '\n';
    return Ok;
  }

  const auto member = make_member(seq, cfg);
  const auto xs = make_grid(member.base(), cfg.grid);
  struct Row {
    double x, base, value, omega;
  };
  const auto rows = detail::parallel_map(xs, [&](double x) {
    return Row{x, member.base().evaluate(x), member.evaluate(x), member.perturbation().evaluate(x)};
  });
  const std::string note =
      seq.kind() == SequenceKind::TM3
          ? "tm3 family W3 + gamma*omega3 extrapolates the tm1/tm2 construction; positivity holds for |gamma| < 1 "
            "because |omega3| <= W3"
          : "";
  if (cfg.emit == "csv") {
    if (!note.empty())
      std::cerr << "note: " << note << '\n';
    out << "x,base,member,omega\n";
    for (const auto &r : rows)
      out << fmt(r.x) << ',' << fmt(r.base) << ',' << fmt(r.value) << ',' << fmt(r.omega) << '\n';
    return Ok;
  }
  if (cfg.emit != "json")
    throw ParseError("--emit must be csv or json");
  json pts = json::array();
  for (const auto &r : rows)
    pts.push_back({r.x, r.base, r.value, r.omega});
  json j = {{"schema_version", io::schema_version},
            {"kind", "class_member"},
            {"sequence", describe(seq)},
            {"k", *cfg.k},
            {"amplitude", member.amplitude()},
            {"amplitude_bound", member.amplitude_bound()},
            {"columns", {"x", "base", "member", "omega"}},
            {"rows", pts}};
  if (!note.empty())
    j["note"] = note;
  out << j.dump(2) << '\n';
  return Ok;
}

int run_convolve(const Config &cfg, std::ostream &out) {
  const auto f = principal_solution(parse_sequence(cfg.f));
  const auto g = principal_solution(parse_sequence(cfg.g));
  if (cfg.x.empty())
    throw ParseError("convolve needs --x");
  json values = json::array();
  for (double x : cfg.x)
    values.push_back({{"x", x}, {"value", mellin_convolve(f, g, x)}});
  out << json{{"schema_version", io::schema_version},
              {"kind", "convolution"},
              {"f", describe(f.sequence())},
              {"g", describe(g.sequence())},
              {"values", values}}
             .dump(2)
      << '\n';
  return Ok;
}

void add_seq(CLI::App *cmd, Config &cfg) {
  cmd->add_option("--seq", cfg.seq, "sequence descriptor: tm1:r=2, tm2:r=3, tm3:r=2, tm4:r=1, gamma:2n+1,n+1")
      ->required();
}

void add_solution(CLI::App *cmd, Config &cfg) {
  cmd->add_option("--solution", cfg.solution, "principal | class-member")
      ->check(CLI::IsMember({"principal", "class-member"}));
  cmd->add_option("--k", cfg.k, "perturbation index (nonzero integer)");
  cmd->add_option("--eps", cfg.eps, "tm1 amplitude, |eps| < 1");
  cmd->add_option("--gamma", cfg.gamma, "tm2/tm3 amplitude");
}

void add_contour(CLI::App *cmd, Config &cfg) {
  cmd->add_option("--contour-c", cfg.contour.c, "abscissa of a fixed inverse-Mellin line");
  cmd->add_option("--contour-tmax", cfg.contour.t_max, "truncation height of the line");
  cmd->add_option("--contour-n", cfg.contour.n, "nodes on the line (>= 64)");
}

} // namespace

int main(int argc, char **argv) {
  Config cfg;
  CLI::App app{"Solutions and uniqueness criteria for gamma-product Stieltjes moment problems.\n"
               "Parallelism: STIELTJES_THREADS (default: all cores). Results do not depend on it."};
  app.require_subcommand(1);
  app.add_option("-o,--output", cfg.output, "write to this file instead of stdout");

  auto *eval = app.add_subcommand("eval", "density value and metadata (JSON)");
  add_seq(eval, cfg);
  add_solution(eval, cfg);
  add_contour(eval, cfg);
  eval->add_option("--x", cfg.x, "evaluation points")->required();

  auto *moments = app.add_subcommand(
      "moments", "moment checks; --table emits CSV columns n,log_integral,log_target,rel_error,nodes_used");
  add_seq(moments, cfg);
  add_solution(moments, cfg);
  add_contour(moments, cfg);
  moments->add_option("--n", cfg.n_range, "moments to check: a..b or a comma list")->capture_default_str();
  moments->add_flag("--table", cfg.table, "CSV instead of JSON");

  auto *criteria = app.add_subcommand("criteria", "uniqueness criteria C1/C2/C3; exit 2 when undecided");
  add_seq(criteria, cfg);
  add_solution(criteria, cfg);
  add_contour(criteria, cfg);
  criteria->add_flag("--json", cfg.json_out, "JSON report instead of a summary");
  criteria->add_flag("--all-terms", cfg.all_terms, "keep every Carleman term in the JSON report");
  criteria->add_option("--n-max", cfg.n_max, "Carleman terms")->capture_default_str();

  auto *klass = app.add_subcommand(
      "class", "class member on an x-grid (CSV columns x,base,member,omega) or --find-gamma-max");
  add_seq(klass, cfg);
  klass->add_option("--k", cfg.k, "perturbation index (nonzero integer)");
  klass->add_option("--eps", cfg.eps, "tm1 amplitude, |eps| < 1");
  klass->add_option("--gamma", cfg.gamma, "tm2 amplitude |gamma| <= gamma_max, tm3 amplitude |gamma| < 1");
  klass->add_option("--emit", cfg.emit, "csv | json")->capture_default_str();
  klass->add_option("--x-min", cfg.grid.x_min, "grid start (default 1e-4)");
  klass->add_option("--x-max", cfg.grid.x_max, "grid end (default: where W drops below 1e-300 of its peak)");
  klass->add_option("--points", cfg.grid.points, "grid size")->capture_default_str();
  klass->add_flag("--find-gamma-max", cfg.find_gamma_max, "certified tm2 amplitude bound (JSON)");
  klass->add_option("--mc-seed", cfg.mc_seed, "seed of the Monte Carlo recheck")->capture_default_str();

  auto *convolve = app.add_subcommand("convolve", "Mellin convolution of two principal solutions (JSON)");
  convolve->add_option("--f", cfg.f, "first sequence descriptor")->required();
  convolve->add_option("--g", cfg.g, "second sequence descriptor")->required();
  convolve->add_option("--x", cfg.x, "evaluation points")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? Ok : Usage;
  }

  std::ofstream file;
  if (!cfg.output.empty()) {
    file.open(cfg.output);
    if (!file) {
      std::cerr << "error: cannot open " << cfg.output << '\n';
      return Usage;
    }
  }
  std::ostream &out = cfg.output.empty() ? std::cout : file;

  try {
    if (eval->parsed())
      return run_eval(cfg, out);
    if (moments->parsed())
      return run_moments(cfg, out);
    if (criteria->parsed())
      return run_criteria(cfg, out);
    if (klass->parsed())
      return run_class(cfg, out);
    if (convolve->parsed())
      return run_convolve(cfg, out);
  } catch (const ParseError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return Usage;
  } catch (const ConstraintError &e) {
    std::cerr << "constraint violated: " << e.what() << '\n';
    return Usage;
  } catch (const DomainError &e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return Usage;
  } catch (const UndecidedError &e) {
    std::cerr << "undecided: " << e.what() << '\n';
    return Undecided;
  } catch (const Error &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return Numeric;
  }
  return Usage;
}
