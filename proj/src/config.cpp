// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cpaep/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cpaep/errors.hpp"

namespace cpaep
{

using nlohmann::json;

namespace
{

// Strict reader over one JSON object: typed getters record the keys they touch and
// finish() rejects whatever is left.
class Section
{
public:
  Section(const json &j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j_.is_object())
    {
      throw ConfigError(label() + ": expected an object");
    }
  }

  bool has(const std::string &key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  double number(const std::string &key)
  {
    const json &v = get(key);
    if (!v.is_number())
    {
      throw ConfigError(field(key) + ": expected a number");
    }
    return v.get<double>();
  }

  double number(const std::string &key, double fallback)
  {
    seen_.insert(key);
    return has(key) ? number(key) : fallback;
  }

  std::optional<double> optional_number(const std::string &key)
  {
    seen_.insert(key);
    if (!has(key))
    {
      return std::nullopt;
    }
    return number(key);
  }

  long long integer(const std::string &key, long long fallback)
  {
    seen_.insert(key);
    if (!has(key))
    {
      return fallback;
    }
    const json &v = j_.at(key);
    if (!v.is_number_integer())
    {
      throw ConfigError(field(key) + ": expected an integer");
    }
    return v.get<long long>();
  }

  std::string string(const std::string &key, const std::string &fallback)
  {
    seen_.insert(key);
    if (!has(key))
    {
      return fallback;
    }
    const json &v = j_.at(key);
    if (!v.is_string())
    {
      throw ConfigError(field(key) + ": expected a string");
    }
    return v.get<std::string>();
  }

  std::optional<Section> child(const std::string &key)
  {
    seen_.insert(key);
    if (!has(key))
    {
      return std::nullopt;
    }
    return Section(j_.at(key), field(key));
  }

  Section required_child(const std::string &key)
  {
    auto c = child(key);
    if (!c)
    {
      throw ConfigError(field(key) + ": missing required section");
    }
    return *c;
  }

  const json &raw(const std::string &key)
  {
    return get(key);
  }

  void finish() const
  {
    for (const auto &item : j_.items())
    {
      if (!seen_.count(item.key()))
      {
        throw ConfigError(field(item.key()) + ": unknown key");
      }
    }
  }

  std::string field(const std::string &key) const
  {
    return path_.empty() ? key : path_ + "." + key;
  }

private:
  const json &get(const std::string &key)
  {
    seen_.insert(key);
    if (!has(key))
    {
      throw ConfigError(field(key) + ": missing required field");
    }
    return j_.at(key);
  }
  std::string label() const { return path_.empty() ? "<root>" : path_; }

  const json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string &field, const std::string &what)
{
  if (!ok)
  {
    throw ConfigError(field + ": " + what);
  }
}

std::vector<cdouble> parse_coefficients(const json &v, const std::string &field)
{
  require(v.is_array() && !v.empty(), field, "expected a non-empty array of [re, im] pairs");
  std::vector<cdouble> out;
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    const json &p = v[i];
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (p.is_number())
    {
      out.emplace_back(p.get<double>(), 0.0);
      continue;
    }
    require(p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number(), f,
            "expected a number or [re, im]");
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

json coefficients_to_json(const std::vector<cdouble> &c)
{
  json out = json::array();
  for (const auto &x : c)
  {
    out.push_back({x.real(), x.imag()});
  }
  return out;
}

struct ParsedCircuit
{
  CircuitConfig cfg;
  bool has_C = false;
  bool has_Z2 = false;
};

ParsedCircuit parse_circuit_section(Section s)
{
  ParsedCircuit out;
  CircuitConfig &c = out.cfg;
  c.Z0 = s.number("Z0_ohm", 50.0);
  c.Z1 = s.number("Z1_ohm");
  const auto z2 = s.optional_number("Z2_ohm");
  c.l1 = s.number("l1_m");
  c.l2 = s.number("l2_m");
  c.v = s.number("v_m_per_s", default_wave_speed);

  Section coupler = s.required_child("coupler");
  const auto cap = coupler.optional_number("C_f");
  c.coupler.omega_d = two_pi * coupler.number("f_d_hz");
  coupler.finish();

  if (auto load = s.child("load"))
  {
    const std::string kind = load->string("kind", "short");
    if (kind == "short")
    {
      c.load = ShortLoad{};
    }
    else if (kind == "reflection")
    {
      c.load = FixedReflection{{load->number("r3_re"), load->number("r3_im", 0.0)}};
    }
    else if (kind == "impedance")
    {
      RationalImpedance z;
      z.numerator = parse_coefficients(load->raw("numerator"), load->field("numerator"));
      z.denominator = load->has("denominator")
                        ? parse_coefficients(load->raw("denominator"), load->field("denominator"))
                        : std::vector<cdouble>{1.0};
      c.load = z;
    }
    else
    {
      throw ConfigError(load->field("kind") + ": expected short, reflection or impedance");
    }
    load->finish();
  }
  s.finish();

  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  require(positive(c.Z0), s.field("Z0_ohm"), "must be positive");
  require(positive(c.Z1), s.field("Z1_ohm"), "must be positive");
  require(std::isfinite(c.l1) && c.l1 >= 0.0, s.field("l1_m"), "must be non-negative");
  require(std::isfinite(c.l2) && c.l2 >= 0.0, s.field("l2_m"), "must be non-negative");
  require(positive(c.v), s.field("v_m_per_s"), "must be positive");
  require(positive(c.coupler.omega_d), "circuit.coupler.f_d_hz", "must be positive");
  if (cap)
  {
    require(positive(*cap), "circuit.coupler.C_f", "must be positive");
    c.coupler.capacitance = *cap;
    out.has_C = true;
  }
  if (z2)
  {
    require(positive(*z2), s.field("Z2_ohm"), "must be positive");
    c.Z2 = *z2;
    out.has_Z2 = true;
  }
  return out;
}

}  // namespace

void apply_overrides(json &doc, const std::vector<std::string> &overrides)
{
  for (const auto &item : overrides)
  {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
    {
      throw ConfigError("override '" + item + "': expected KEY=VALUE");
    }
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded())
    {
      value = text;
    }
    std::string pointer;
    std::stringstream parts(key);
    std::string part;
    while (std::getline(parts, part, '.'))
    {
      if (part.empty())
      {
        throw ConfigError("override '" + item + "': empty path component");
      }
      pointer += "/" + part;
    }
    try
    {
      doc[json::json_pointer(pointer)] = value;
    }
    catch (const json::exception &e)
    {
      throw ConfigError("override '" + item + "': " + e.what());
    }
  }
}

CircuitConfig parse_circuit(const json &block)
{
  return parse_circuit_section(Section(block, "circuit")).cfg;
}

json circuit_to_json(const CircuitConfig &cfg)
{
  json load;
  if (std::holds_alternative<ShortLoad>(cfg.load))
  {
    load = {{"kind", "short"}};
  }
  else if (const auto *f = std::get_if<FixedReflection>(&cfg.load))
  {
    load = {{"kind", "reflection"}, {"r3_re", f->r3.real()}, {"r3_im", f->r3.imag()}};
  }
  else
  {
    const auto &z = std::get<RationalImpedance>(cfg.load);
    load = {{"kind", "impedance"},
            {"numerator", coefficients_to_json(z.numerator)},
            {"denominator", coefficients_to_json(z.denominator)}};
  }
  json out = {{"Z0_ohm", cfg.Z0},
              {"Z1_ohm", cfg.Z1},
              {"l1_m", cfg.l1},
              {"l2_m", cfg.l2},
              {"v_m_per_s", cfg.v},
              {"coupler", {{"f_d_hz", cfg.coupler.omega_d / two_pi}}},
              {"load", load}};
  if (cfg.Z2 > 0.0)
  {
    out["Z2_ohm"] = cfg.Z2;
  }
  if (cfg.coupler.capacitance > 0.0)
  {
    out["coupler"]["C_f"] = cfg.coupler.capacitance;
  }
  return out;
}

RunConfig parse_run_config(const json &doc)
{
  Section root(doc, "");
  RunConfig rc;
  {
    const auto parsed = parse_circuit_section(root.required_child("circuit"));
    rc.circuit = parsed.cfg;
    rc.has_capacitance = parsed.has_C;
    rc.has_Z2 = parsed.has_Z2;
  }

  if (auto s = root.child("solver"))
  {
    const auto re = s->optional_number("seed_re_hz");
    const auto im = s->optional_number("seed_im_hz");
    require(re.has_value() == im.has_value(), "solver.seed_re_hz",
            "seed_re_hz and seed_im_hz must be given together");
    if (re)
    {
      rc.solver.seed = ComplexFrequency::from_hz(*re, *im);
    }
    rc.solver.branch = branch_from_string(s->string("branch", "auto"));
    rc.solver.options.tolerance = s->number("tol", rc.solver.options.tolerance);
    rc.solver.options.max_iterations =
      static_cast<int>(s->integer("max_iter", rc.solver.options.max_iterations));
    s->finish();
    require(rc.solver.options.tolerance > 0.0, "solver.tol", "must be positive");
    require(rc.solver.options.max_iterations > 0, "solver.max_iter", "must be positive");
  }

  if (auto s = root.child("sweep"))
  {
    rc.sweep.nx = static_cast<int>(s->integer("nx", rc.sweep.nx));
    rc.sweep.ny = static_cast<int>(s->integer("ny", rc.sweep.ny));
    const auto re_min = s->optional_number("re_min_hz");
    const auto re_max = s->optional_number("re_max_hz");
    const auto im_min = s->optional_number("im_min_hz");
    const auto im_max = s->optional_number("im_max_hz");
    const int given = re_min.has_value() + re_max.has_value() + im_min.has_value() +
                      im_max.has_value();
    require(given == 0 || given == 4, "sweep", "give all four range bounds or none");
    if (given == 4)
    {
      rc.sweep.spec = SweepSpec{two_pi * *re_min, two_pi * *re_max, two_pi * *im_min,
                                two_pi * *im_max, rc.sweep.nx, rc.sweep.ny};
      require(*re_max >= *re_min, "sweep.re_max_hz", "must not be below re_min_hz");
      require(*im_max >= *im_min, "sweep.im_max_hz", "must not be below im_min_hz");
    }
    rc.sweep.fit_min_rel = s->number("fit_min_rel", rc.sweep.fit_min_rel);
    rc.sweep.fit_max_rel = s->number("fit_max_rel", rc.sweep.fit_max_rel);
    s->finish();
    require(rc.sweep.nx >= 1 && rc.sweep.ny >= 1, "sweep.nx", "grid counts must be >= 1");
    require(rc.sweep.fit_min_rel > 0.0 && rc.sweep.fit_max_rel > rc.sweep.fit_min_rel,
            "sweep.fit_min_rel", "need 0 < fit_min_rel < fit_max_rel");
  }

  if (auto s = root.child("coalesce"))
  {
    rc.coalesce.ratio_min = s->optional_number("ratio_min");
    rc.coalesce.ratio_max = s->optional_number("ratio_max");
    rc.coalesce.n_steps = static_cast<int>(s->integer("n_steps", rc.coalesce.n_steps));
    s->finish();
    require(rc.coalesce.ratio_min.has_value() == rc.coalesce.ratio_max.has_value(),
            "coalesce.ratio_min", "ratio_min and ratio_max must be given together");
    require(rc.coalesce.n_steps >= 1, "coalesce.n_steps", "must be >= 1");
    if (rc.coalesce.ratio_min)
    {
      require(*rc.coalesce.ratio_min > 0.0 && *rc.coalesce.ratio_max >= *rc.coalesce.ratio_min,
              "coalesce.ratio_max", "need 0 < ratio_min <= ratio_max");
    }
  }

  if (auto s = root.child("waveform"))
  {
    rc.waveform.m = static_cast<int>(s->integer("m", 0));
    const std::string env = s->string("envelope", "growing");
    require(env == "growing" || env == "decaying", s->field("envelope"),
            "expected growing or decaying");
    rc.waveform.decaying = env == "decaying";
    rc.waveform.f_carrier_hz = s->optional_number("f_carrier_hz");
    rc.waveform.gamma_hz = s->optional_number("gamma_hz");
    rc.waveform.window_s = s->optional_number("window_s");
    const long long n = s->integer("n_samples", 1024);
    s->finish();
    require(rc.waveform.m >= 0, "waveform.m", "must be non-negative");
    require(n >= 1024, "waveform.n_samples", "must be at least 1024");
    rc.waveform.n_samples = static_cast<std::size_t>(n);
    if (rc.waveform.gamma_hz)
    {
      require(*rc.waveform.gamma_hz >= 0.0, "waveform.gamma_hz",
              "must be non-negative (the sign comes from envelope)");
    }
    if (rc.waveform.window_s)
    {
      require(*rc.waveform.window_s > 0.0, "waveform.window_s", "must be positive");
    }
  }

  if (auto s = root.child("simulation"))
  {
    rc.simulation.pad = static_cast<int>(s->integer("pad", rc.simulation.pad));
    rc.simulation.round_trips_after =
      s->number("round_trips_after", rc.simulation.round_trips_after);
    rc.simulation.tolerance = s->number("tolerance", rc.simulation.tolerance);
    s->finish();
    require(rc.simulation.pad >= 1, "simulation.pad", "must be >= 1");
    require(rc.simulation.round_trips_after >= 0.0, "simulation.round_trips_after",
            "must be non-negative");
  }

  if (auto s = root.child("taylor"))
  {
    rc.taylor.order = static_cast<int>(s->integer("order", rc.taylor.order));
    rc.taylor.gamma_in_hz = s->optional_number("gamma_in_hz");
    rc.taylor.gamma_cavity_hz = s->optional_number("gamma_cavity_hz");
    rc.taylor.t_max_s = s->optional_number("t_max_s");
    s->finish();
    require(rc.taylor.order >= 0, "taylor.order", "must be non-negative");
  }

  root.finish();
  return rc;
}

RunConfig load_run_config(const std::string &path, const std::vector<std::string> &overrides)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError(path + ": cannot open config file");
  }
  json doc;
  try
  {
    doc = json::parse(in);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError(path + ": " + e.what());
  }
  apply_overrides(doc, overrides);
  try
  {
    return parse_run_config(doc);
  }
  catch (const ConfigError &e)
  {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace cpaep
