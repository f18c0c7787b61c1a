// Command-line front end for the hyperexponential pricing library.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "hyperlev/implied_vol.hpp"
#include "hyperlev/inversion.hpp"
#include "hyperlev/model.hpp"
#include "hyperlev/presets.hpp"
#include "hyperlev/pricing.hpp"
#include "hyperlev/roots.hpp"

using namespace hyperlev;

namespace {

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct OutputOptions {
  std::string format = "csv";
  std::string path;
  std::string precision = "6";
};

std::string format_double(double v, bool full) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  if (full) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    if (std::string(buf) == "-0.000000") return "0.000000";
  }
  return buf;
}

std::string render(const Table& t, const OutputOptions& o) {
  const bool full = o.precision == "full";
  std::ostringstream out;
  if (o.format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json rec;
      for (std::size_t i = 0; i < t.columns.size(); ++i) {
        const Cell& c = row[i];
        if (const double* d = std::get_if<double>(&c)) {
          if (!std::isfinite(*d))
            rec[t.columns[i]] = nullptr;
          else
            rec[t.columns[i]] = std::stod(format_double(*d, full));
        } else if (const long* l = std::get_if<long>(&c)) {
          rec[t.columns[i]] = *l;
        } else {
          rec[t.columns[i]] = std::get<std::string>(c);
        }
      }
      arr.push_back(std::move(rec));
    }
    out << arr.dump(2) << '\n';
    return out.str();
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      const Cell& c = row[i];
      if (const double* d = std::get_if<double>(&c))
        out << format_double(*d, full);
      else if (const long* l = std::get_if<long>(&c))
        out << *l;
      else
        out << std::get<std::string>(c);
    }
    out << '\n';
  }
  return out.str();
}

void emit(const Table& t, const OutputOptions& o) {
  const std::string text = render(t, o);
  if (o.path.empty() || o.path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(o.path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot write " + o.path);
  f << text;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, std::string("bad ") + what + " entry '" + item + "'");
    }
  }
  return out;
}

// "a:b" or "a:b:step" into a grid including both ends.
std::vector<double> parse_range(const std::string& text, double default_step) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, "bad range '" + text + "'");
    }
  }
  if (parts.size() < 2 || parts.size() > 3) throw Error(ErrorCode::ConfigError, "range must be a:b or a:b:step");
  const double step = parts.size() == 3 ? parts[2] : default_step;
  if (!(step > 0.0) || !(parts[1] >= parts[0])) throw Error(ErrorCode::ConfigError, "range must increase with a positive step");
  std::vector<double> grid;
  const long n = std::lround(std::floor((parts[1] - parts[0]) / step + 1e-9));
  for (long i = 0; i <= n; ++i) grid.push_back(parts[0] + i * step);
  return grid;
}

struct ModelOptions {
  int set = 1;
  std::string fixture;
  std::optional<double> sigma;
  std::optional<double> r;
};

Fixture load_model(const ModelOptions& m) {
  Fixture f = m.fixture.empty() ? parameter_set(m.set) : load_fixture(m.fixture);
  if (m.sigma || m.r) {
    const double sigma = m.sigma.value_or(f.params.sigma());
    const double r = m.r.value_or(f.r);
    f.r = r;
    f.params = HyperExpParams(sigma, risk_neutral_drift(sigma, f.params.pos(), f.params.neg(), r), f.params.pos(),
                              f.params.neg());
  }
  return f;
}

void add_model_options(CLI::App* app, ModelOptions& m) {
  app->add_option("--set", m.set, "Bundled parameter set (1 or 2)")->check(CLI::IsMember({1, 2}));
  app->add_option("--fixture", m.fixture, "Parameter file, overrides --set");
  app->add_option("--sigma", m.sigma, "Override sigma; the drift is re-derived from r");
  app->add_option("--r", m.r, "Override the interest rate; the drift is re-derived");
}

TruncationVector truncation_or_default(const std::string& text, const HyperExpParams& p, Side side) {
  if (!text.empty()) return TruncationVector::parse(text);
  const auto [M, Mh] = root_counts(p);
  return TruncationVector::default_for(side == Side::pos ? M : Mh);
}

Side pricing_side(const OptionSpec& s) {
  const double k = s.k();
  return (std::abs(k - 1.0) < kAtmTolerance || k > 1.0) ? Side::pos : Side::neg;
}

// ---------------------------------------------------------------------------------------

Table run_roots(const ModelOptions& mo, double c, const std::string& range, int order) {
  const Fixture f = load_model(mo);
  const auto& p = f.params;
  const std::vector<double> grid = parse_range(range, 1.0);
  std::vector<RootExpansion> series = expand_roots(p, Side::pos, order);
  const auto neg = expand_roots(p, Side::neg, order);
  series.insert(series.end(), neg.begin(), neg.end());
  ContourTracker tracker(p, c, true);
  Table t;
  t.columns = {"u", "side", "index", "re", "im", "residual", "deriv_error", "tracked_distance"};
  for (double u : grid) {
    const auto& tracked = tracker.advance(u);
    const cplx q(c, u);
    for (const auto& root : series) {
      const cplx z = root_location(root, q);
      const double residual = std::abs(psi(p, z) - q);
      cplx dz = eval_expansion(derive_series(root, DerivedKind::deriv), q);
      if (root.side == Side::neg) dz = -dz;
      const double deriv_error = std::abs(dz - 1.0 / psi_prime(p, z));
      double dist = std::numeric_limits<double>::infinity();
      for (const cplx& w : tracked) dist = std::min(dist, std::abs(w - z));
      t.rows.push_back({u, std::string(root.side == Side::pos ? "pos" : "neg"), static_cast<long>(root.index), z.real(),
                        z.imag(), residual, deriv_error, dist});
    }
  }
  return t;
}

OptionSpec make_spec(double S0, double K, double r, double T, const std::string& kind) {
  OptionSpec s;
  s.S0 = S0;
  s.K = K;
  s.r = r;
  s.T = T;
  s.kind = kind == "put" ? OptionKind::put : OptionKind::call;
  return s;
}

Table run_price(const ModelOptions& mo, double S0, double K, const std::vector<double>& Ts, const std::string& kind,
                const std::string& trunc_text) {
  if (Ts.empty()) throw Error(ErrorCode::ConfigError, "the maturity list is empty");
  const Fixture f = load_model(mo);
  const OptionSpec base = make_spec(S0, K, f.r, 0.0, kind);
  const TruncationVector trunc = truncation_or_default(trunc_text, f.params, pricing_side(base));
  Table t;
  t.columns = {"T", "price", "max_tail", "warning"};
  for (double T : Ts) {
    OptionSpec s = base;
    s.T = T;
    const PriceResult res = price(s, f.params, trunc);
    double tail = 0.0;
    for (double v : res.tail) tail = std::max(tail, v);
    t.rows.push_back({T, res.value, tail, res.warning});
  }
  return t;
}

Table run_greeks(const ModelOptions& mo, double S0, double K, const std::vector<double>& Ts, const std::string& kind,
                 const std::string& trunc_text) {
  if (Ts.empty()) throw Error(ErrorCode::ConfigError, "the maturity list is empty");
  const Fixture f = load_model(mo);
  const OptionSpec base = make_spec(S0, K, f.r, 0.0, kind);
  const TruncationVector trunc = truncation_or_default(trunc_text, f.params, pricing_side(base));
  Table t;
  t.columns = {"T", "price", "theta", "delta", "gamma"};
  for (double T : Ts) {
    OptionSpec s = base;
    s.T = T;
    const double v = price_value(s, f.params, trunc);
    const double th = theta(s, f.params, trunc);
    const Greeks g = delta_gamma(s, f.params, trunc);
    t.rows.push_back({T, v, th, g.delta, g.gamma});
  }
  return t;
}

Table run_implied_vol(const ModelOptions& mo, const std::vector<double>& Ts_in, double t_max, int points) {
  ModelOptions m = mo;
  m.r = 0.0;  // the expansion is defined for r = 0 and S0 = K = 1
  const Fixture f = load_model(m);
  std::vector<double> Ts = Ts_in;
  if (Ts.empty()) {
    if (points < 1 || !(t_max > 0.0)) throw Error(ErrorCode::ConfigError, "need --T or a positive --t-max and --points");
    for (int i = 1; i <= points; ++i) Ts.push_back(t_max * i / points);
  }
  const int orders[4] = {1, 2, 5, 10};
  std::vector<ImpliedVolExpansion> ex;
  for (int o : orders) ex.push_back(implied_vol_expansion(f.params, o));
  const auto [M, Mh] = root_counts(f.params);
  (void)Mh;
  const TruncationVector trunc = TruncationVector::default_for(M);
  Table t;
  t.columns = {"T", "sigmahat_1", "sigmahat_2", "sigmahat_5", "sigmahat_10", "roundtrip_error_10"};
  for (double T : Ts) {
    std::vector<Cell> row{T};
    for (const auto& e : ex) row.emplace_back(e.evaluate(T));
    const double cx = price_value(make_spec(1.0, 1.0, 0.0, T, "call"), f.params, trunc);
    row.emplace_back(std::abs(bs_atm_call(ex.back().evaluate(T) * std::sqrt(T)) - cx));
    t.rows.push_back(std::move(row));
  }
  return t;
}

struct DigitalOptions {
  double t = 0.25, k = 1.1, c = 0.5, upper = 1e3, u_switch = 80.0;
  long steps = 100000;
  std::string mode = "both";
};

void digital_rows(Table& t, const HyperExpParams& p, double r, const DigitalOptions& d) {
  QuadratureSpec q;
  q.c = d.c;
  q.upper = d.upper;
  q.steps = d.steps;
  q.t = d.t;
  for (const char* name : {"numeric", "hybrid"}) {
    if (d.mode != "both" && d.mode != name) continue;
    const RootMode mode = std::string(name) == "numeric" ? RootMode::numeric : RootMode::hybrid;
    const DigitalResult res = digital_barrier(p, d.t, d.k, r, q, mode, d.u_switch);
    t.rows.push_back({d.steps, d.upper, std::string(name), res.price, res.root_seconds, res.total_seconds});
  }
}

Table digital_table() {
  Table t;
  t.columns = {"steps", "upper", "method", "price", "root_seconds", "total_seconds"};
  return t;
}

Table run_digital(const ModelOptions& mo, const DigitalOptions& d) {
  const Fixture f = load_model(mo);
  Table t = digital_table();
  digital_rows(t, f.params, f.r, d);
  return t;
}

Table run_fourier(const ModelOptions& mo, double S0, double K, const std::vector<double>& Ts, std::optional<double> c,
                  std::optional<double> upper, std::optional<long> steps) {
  if (Ts.empty()) throw Error(ErrorCode::ConfigError, "the maturity list is empty");
  const Fixture f = load_model(mo);
  QuadratureSpec q = fourier_default_spec(f.params);
  if (c) q.c = *c;
  if (upper) q.upper = *upper;
  if (steps) q.steps = *steps;
  Table t;
  t.columns = {"T", "price"};
  for (double T : Ts) t.rows.push_back({T, fourier_call_price(f.params, S0, K, f.r, T, q)});
  return t;
}

Table reproduce_price_table(const presets::PriceTable& pt, bool with_fourier) {
  const Fixture f = parameter_set(pt.set, pt.sigma, pt.r);
  Table t;
  t.columns = {"truncation"};
  for (double T : pt.maturities) {
    char label[32];
    std::snprintf(label, sizeof label, "T=%g", T);
    t.columns.push_back(label);
  }
  t.columns.push_back("seconds");
  for (const auto& trunc : pt.rows) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Cell> row{trunc.str()};
    // One expansion serves every maturity of the row.
    const OptionSpec base = make_spec(pt.S0, pt.K, pt.r, 0.0, "call");
    for (double T : pt.maturities) {
      OptionSpec s = base;
      s.T = T;
      row.emplace_back(price_value(s, f.params, trunc));
    }
    row.emplace_back(seconds_since(t0));
    t.rows.push_back(std::move(row));
  }
  if (with_fourier) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Cell> row{std::string("fourier")};
    const QuadratureSpec q = fourier_default_spec(f.params);
    for (double T : pt.maturities) row.emplace_back(fourier_call_price(f.params, pt.S0, pt.K, pt.r, T, q));
    row.emplace_back(seconds_since(t0));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table reproduce_table1(bool extended) {
  const presets::DigitalTable d = presets::table1();
  const Fixture f = parameter_set(d.set, d.sigma, d.r);
  Table t = digital_table();
  for (const auto& row : d.rows) {
    if (row.steps > d.desk_steps && !extended) continue;
    DigitalOptions o;
    o.t = d.t;
    o.k = d.k;
    o.c = d.c;
    o.steps = row.steps;
    o.upper = row.upper;
    digital_rows(t, f.params, d.r, o);
  }
  return t;
}

void print_error(ErrorCode code, const std::string& message) {
  nlohmann::ordered_json rec;
  rec["error"] = std::string(to_string(code));
  rec["message"] = message;
  std::cerr << rec.dump() << '\n';
}

int exit_code_for(ErrorCode code) {
  return (code == ErrorCode::ConfigError || code == ErrorCode::FixtureError) ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Series and Laplace-inversion pricing for hyperexponential Levy models"};
  app.set_help_all_flag("--help-all");
  OutputOptions out;
  std::string reproduce;
  bool with_fourier = false;
  bool extended = false;
  app.add_option("--format", out.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("-o,--output", out.path, "Output file (default: stdout)");
  app.add_option("--precision", out.precision, "6 decimals or full")->check(CLI::IsMember({"6", "full"}));
  app.add_option("--reproduce", reproduce, "Regenerate a reference price or digital table")
      ->check(CLI::IsMember({"table1", "table2", "table3", "table4"}));
  app.add_flag("--fourier", with_fourier, "Append the Fourier comparison row to tables 2-4");
  app.add_flag("--extended", extended, "Include the 1e7-step row of table 1");
  app.require_subcommand(0, 1);
  app.fallthrough();

  ModelOptions model;
  std::string trunc_text;
  std::string kind = "call";
  std::string t_list;
  double S0 = 0, K = 0;

  auto* roots_cmd = app.add_subcommand("roots", "Root expansions against tracked roots along c + iu");
  double contour = 0.5;
  std::string u_range = "80:150";
  int order = 10;
  add_model_options(roots_cmd, model);
  roots_cmd->add_option("--contour", contour, "Contour abscissa c");
  roots_cmd->add_option("--u", u_range, "Range a:b[:step] of u (step 1 by default)");
  roots_cmd->add_option("--order", order, "Expansion order in 1/q");

  auto add_option_inputs = [&](CLI::App* cmd) {
    add_model_options(cmd, model);
    cmd->add_option("--S0", S0, "Spot")->required();
    cmd->add_option("--K", K, "Strike")->required();
    cmd->add_option("--T", t_list, "Comma-separated maturities")->required();
  };
  auto* price_cmd = app.add_subcommand("price", "Series prices over a maturity list");
  add_option_inputs(price_cmd);
  price_cmd->add_option("--kind", kind, "call or put")->check(CLI::IsMember({"call", "put"}));
  price_cmd->add_option("--trunc", trunc_text, "Truncation vector, e.g. 15,15,15,15,15,30,30,60");

  auto* greeks_cmd = app.add_subcommand("greeks", "Price, theta, delta and gamma over a maturity list");
  add_option_inputs(greeks_cmd);
  greeks_cmd->add_option("--kind", kind, "call or put")->check(CLI::IsMember({"call", "put"}));
  greeks_cmd->add_option("--trunc", trunc_text, "Truncation vector");

  auto* iv_cmd = app.add_subcommand("implied-vol", "At-the-money implied volatility expansions (r = 0)");
  double t_max = 0.05;
  int points = 50;
  add_model_options(iv_cmd, model);
  iv_cmd->add_option("--T", t_list, "Comma-separated maturities (overrides --t-max/--points)");
  iv_cmd->add_option("--t-max", t_max, "Largest maturity of the uniform grid");
  iv_cmd->add_option("--points", points, "Number of grid points");

  auto* dig_cmd = app.add_subcommand("digital", "Up-and-out digital by Bromwich inversion");
  DigitalOptions dig;
  add_model_options(dig_cmd, model);
  dig_cmd->add_option("--t", dig.t, "Maturity");
  dig_cmd->add_option("--k", dig.k, "Barrier level e^{x} relative to spot (> 1)");
  dig_cmd->add_option("--c", dig.c, "Contour abscissa");
  dig_cmd->add_option("--steps", dig.steps, "Filon subintervals (even)");
  dig_cmd->add_option("--upper", dig.upper, "Upper integration limit");
  dig_cmd->add_option("--mode", dig.mode, "numeric, hybrid or both")->check(CLI::IsMember({"numeric", "hybrid", "both"}));
  dig_cmd->add_option("--u-switch", dig.u_switch, "Hybrid mode uses the series above this u");

  auto* fou_cmd = app.add_subcommand("fourier-price", "Call prices by Fourier inversion in log-strike");
  std::optional<double> fc, fupper;
  std::optional<long> fsteps;
  add_option_inputs(fou_cmd);
  fou_cmd->add_option("--c", fc, "Strip abscissa, 1 - rho_1 < c < 0");
  fou_cmd->add_option("--upper", fupper, "Upper integration limit");
  fou_cmd->add_option("--steps", fsteps, "Filon subintervals");

  for (CLI::App* sub : {roots_cmd, price_cmd, greeks_cmd, iv_cmd, dig_cmd, fou_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(ErrorCode::ConfigError, e.what());
    return 2;
  }

  try {
    Table table;
    const bool has_sub = !app.get_subcommands().empty();
    if (!reproduce.empty() && has_sub) throw Error(ErrorCode::ConfigError, "--reproduce does not take a subcommand");
    if (reproduce.empty() && !has_sub) throw Error(ErrorCode::ConfigError, "a subcommand or --reproduce is required");
    if (reproduce == "table1") {
      table = reproduce_table1(extended);
    } else if (reproduce == "table2") {
      table = reproduce_price_table(presets::table2(), with_fourier);
    } else if (reproduce == "table3") {
      table = reproduce_price_table(presets::table3(), with_fourier);
    } else if (reproduce == "table4") {
      table = reproduce_price_table(presets::table4(), with_fourier);
    } else if (roots_cmd->parsed()) {
      table = run_roots(model, contour, u_range, order);
    } else if (price_cmd->parsed()) {
      table = run_price(model, S0, K, parse_list(t_list, "maturity"), kind, trunc_text);
    } else if (greeks_cmd->parsed()) {
      table = run_greeks(model, S0, K, parse_list(t_list, "maturity"), kind, trunc_text);
    } else if (iv_cmd->parsed()) {
      table = run_implied_vol(model, parse_list(t_list, "maturity"), t_max, points);
    } else if (dig_cmd->parsed()) {
      table = run_digital(model, dig);
    } else if (fou_cmd->parsed()) {
      table = run_fourier(model, S0, K, parse_list(t_list, "maturity"), fc, fupper, fsteps);
    }
    emit(table, out);
  } catch (const Error& e) {
    print_error(e.code(), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    print_error(ErrorCode::DomainError, e.what());
    return 1;
  }
  return 0;
}
