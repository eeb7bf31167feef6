#include "uwpg/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "uwpg/vtk.hpp"

namespace uwpg {

Preset parse_preset(const std::string& name) {
  if (name == "catalytic_filter" || name == "CATALYTIC_FILTER") return Preset::CatalyticFilter;
  if (name == "channel" || name == "CHANNEL") return Preset::Channel;
  if (name == "manufactured_1d" || name == "MANUFACTURED_1D") return Preset::Manufactured1D;
  if (name == "custom" || name == "CUSTOM") return Preset::Custom;
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::string to_string(Preset preset) {
  switch (preset) {
    case Preset::CatalyticFilter: return "catalytic_filter";
    case Preset::Channel: return "channel";
    case Preset::Manufactured1D: return "manufactured_1d";
    case Preset::Custom: return "custom";
  }
  return "?";
}

std::function<double(double)> InflowProfile::function() const {
  if (kind == Kind::Constant) return [v = parameter](double) { return v; };
  return [a = parameter](double z) {
    const double s = std::sin(a * std::numbers::pi * z);
    return s * s;
  };
}

InflowProfile InflowProfile::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("inflow profile must look like sin2:<a> or const:<v>");
  const std::string kind = text.substr(0, colon);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number in inflow profile '" + text + "'");
  }
  if (kind == "sin2") return {Kind::Sin2, value};
  if (kind == "const") return {Kind::Constant, value};
  throw std::invalid_argument("unknown inflow profile kind '" + kind + "'");
}

std::string InflowProfile::to_string() const {
  return (kind == Kind::Sin2 ? "sin2:" : "const:") + format_double(parameter);
}

ProblemParams ProblemParams::for_preset(Preset preset) {
  ProblemParams p;
  p.preset = preset;
  switch (preset) {
    case Preset::CatalyticFilter:
    case Preset::Custom:
      break;
    case Preset::Channel:
      p.geometry = BoundaryGeometry::channel();
      p.inflow = {InflowProfile::Kind::Constant, 1.0};
      p.k_min = 1.0;
      p.c0 = 0.0;
      p.heterogeneous = false;
      break;
    case Preset::Manufactured1D:
      p.geometry = BoundaryGeometry::channel();
      p.inflow = {InflowProfile::Kind::Constant, 1.0};
      p.c0 = 1.0;
      p.darcy_velocity = false;
      p.heterogeneous = false;
      break;
  }
  return p;
}

double manufactured_u(double x) { return std::exp(-x); }

double manufactured_w(double x) { return 0.5 * std::exp(-2.0) * std::exp(x) + 0.5 * std::exp(-x); }

bool has_exact_solution(const ProblemParams& params) {
  if (params.preset == Preset::Manufactured1D) return true;
  return params.preset == Preset::Channel && params.c0 == 0.0 &&
         params.inflow.kind == InflowProfile::Kind::Constant;
}

ProblemInstance realize(const ProblemParams& params, int n, const DarcySettings& darcy) {
  const int ny = params.preset == Preset::Manufactured1D ? 1 : n;
  auto mesh = std::make_shared<const Mesh>(n, ny, params.geometry);

  ScalarField k = ScalarField::constant(1.0);
  ScalarField c = ScalarField::constant(params.c0);
  if (params.heterogeneous) {
    k = ScalarField::indicator_box(*mesh, params.reaction_box, params.k_min, 1.0);
    c = ScalarField::indicator_box(*mesh, params.reaction_box, params.c0, 0.0);
  }

  ProblemInstance inst{mesh, std::nullopt,
                       {VelocityField::uniform({1.0, 0.0}), c, ScalarField::constant(0.0),
                        BoundaryData::inflow(params.inflow.function())},
                       std::nullopt};
  if (params.darcy_velocity) {
    auto space = std::make_shared<const FeSpace>(mesh, darcy.order, Continuity::Continuous);
    inst.pressure = solve_pressure(space, k, darcy.krylov);
    inst.transport.velocity = inst.pressure->velocity();
  }

  if (!has_exact_solution(params)) return inst;
  if (params.preset == Preset::Manufactured1D)
    inst.exact = [](const Point& x) { return manufactured_u(x[0]); };
  else
    inst.exact = [v = params.inflow.parameter](const Point&) { return v; };
  return inst;
}

}  // namespace uwpg
