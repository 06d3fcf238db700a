#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "shockstab/errors.hpp"
#include "shockstab/types.hpp"

namespace shockstab {

using Params = std::map<std::string, double>;

namespace detail {

inline double param_or(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

inline void reject_unknown_params(const Params& p, std::initializer_list<const char*> known,
                                  const std::string& system) {
  for (const auto& [key, value] : p) {
    (void)value;
    bool ok = false;
    for (const char* k : known)
      if (key == k) ok = true;
    if (!ok)
      throw ConfigError("unknown parameter '" + key + "' for system '" + system + "'");
  }
}

}  // namespace detail

inline SystemModel make_burgers() {
  SystemModel m;
  m.name = "burgers";
  m.n = 1;
  m.flux = [](const Vec& u) { return Vec::Constant(1, 0.5 * u[0] * u[0]); };
  m.jacobian = [](const Vec& u) { return Mat::Constant(1, 1, u[0]); };
  m.entropy = [](const Vec& u) { return 0.5 * u[0] * u[0]; };
  m.entropy_gradient = [](const Vec& u) { return u; };
  m.entropy_hessian = [](const Vec&) { return Mat::Identity(1, 1); };
  m.entropy_flux = [](const Vec& u) { return u[0] * u[0] * u[0] / 3.0; };
  return m;
}

/// Isentropic gas dynamics in Lagrangian coordinates, states (v, u) with
/// specific volume v > 0 and pressure law p(v) = k v^-gamma.
inline SystemModel make_p_system(double k, double gamma) {
  if (!(k > 0.0)) throw ConfigError("p_system: parameter k must be > 0");
  if (!(gamma > 1.0)) throw ConfigError("p_system: parameter gamma must be > 1");
  SystemModel m;
  m.name = "p_system";
  m.n = 2;
  auto pres = [k, gamma](double v) { return k * std::pow(v, -gamma); };
  auto dpres = [k, gamma](double v) { return -k * gamma * std::pow(v, -gamma - 1.0); };
  m.flux = [pres](const Vec& w) {
    Vec f(2);
    f << -w[1], pres(w[0]);
    return f;
  };
  m.jacobian = [dpres](const Vec& w) {
    Mat a(2, 2);
    a << 0.0, -1.0, dpres(w[0]), 0.0;
    return a;
  };
  m.entropy = [k, gamma](const Vec& w) {
    return 0.5 * w[1] * w[1] + k * std::pow(w[0], 1.0 - gamma) / (gamma - 1.0);
  };
  m.entropy_gradient = [pres](const Vec& w) {
    Vec g(2);
    g << -pres(w[0]), w[1];
    return g;
  };
  m.entropy_hessian = [dpres](const Vec& w) {
    Mat p = Mat::Zero(2, 2);
    p(0, 0) = -dpres(w[0]);
    p(1, 1) = 1.0;
    return p;
  };
  m.entropy_flux = [pres](const Vec& w) { return w[1] * pres(w[0]); };
  m.state_domain = [](const Vec& w) { return w[0] > 0.0; };
  return m;
}

/// 1-D compressible Euler for an ideal gamma-law gas in conservative
/// variables (rho, rho u, E). The entropy is eta = -rho s / (gamma - 1) with
/// s = log(p rho^-gamma), strictly convex on rho > 0, p > 0.
inline SystemModel make_euler_ideal(double gamma) {
  if (!(gamma > 1.0)) throw ConfigError("euler_ideal: parameter gamma must be > 1");
  SystemModel m;
  m.name = "euler_ideal";
  m.n = 3;
  auto pressure = [gamma](const Vec& w) {
    return (gamma - 1.0) * (w[2] - 0.5 * w[1] * w[1] / w[0]);
  };
  m.flux = [pressure](const Vec& w) {
    const double u = w[1] / w[0];
    const double p = pressure(w);
    Vec f(3);
    f << w[1], w[1] * u + p, u * (w[2] + p);
    return f;
  };
  m.jacobian = [gamma, pressure](const Vec& w) {
    const double u = w[1] / w[0];
    const double h = (w[2] + pressure(w)) / w[0];  // total specific enthalpy
    Mat a(3, 3);
    a << 0.0, 1.0, 0.0,
        0.5 * (gamma - 3.0) * u * u, (3.0 - gamma) * u, gamma - 1.0,
        u * (0.5 * (gamma - 1.0) * u * u - h), h - (gamma - 1.0) * u * u, gamma * u;
    return a;
  };
  m.entropy = [gamma, pressure](const Vec& w) {
    const double s = std::log(pressure(w) * std::pow(w[0], -gamma));
    return -w[0] * s / (gamma - 1.0);
  };
  m.entropy_gradient = [gamma, pressure](const Vec& w) {
    const double p = pressure(w);
    const double u = w[1] / w[0];
    const double s = std::log(p * std::pow(w[0], -gamma));
    Vec g(3);
    g << (gamma - s) / (gamma - 1.0) - 0.5 * w[0] * u * u / p, w[0] * u / p, -w[0] / p;
    return g;
  };
  m.entropy_hessian = [gamma, pressure](const Vec& w) {
    const double a = gamma - 1.0;
    const double rho = w[0];
    const double u = w[1] / w[0];
    const double p = pressure(w);
    const double p2 = p * p;
    Mat h(3, 3);
    h(0, 0) = gamma / (a * rho) + 0.25 * a * rho * u * u * u * u / p2;
    h(0, 1) = -0.5 * a * rho * u * u * u / p2;
    h(0, 2) = -1.0 / p + 0.5 * a * rho * u * u / p2;
    h(1, 1) = 1.0 / p + a * rho * u * u / p2;
    h(1, 2) = -a * rho * u / p2;
    h(2, 2) = a * rho / p2;
    h(1, 0) = h(0, 1);
    h(2, 0) = h(0, 2);
    h(2, 1) = h(1, 2);
    return h;
  };
  m.entropy_flux = [gamma, pressure](const Vec& w) {
    const double s = std::log(pressure(w) * std::pow(w[0], -gamma));
    return -w[1] * s / (gamma - 1.0);
  };
  m.state_domain = [pressure](const Vec& w) { return w[0] > 0.0 && pressure(w) > 0.0; };
  return m;
}

/// Shallow water, states (h, hu), energy entropy eta = m^2/(2h) + g h^2/2.
inline SystemModel make_shallow_water(double g) {
  if (!(g > 0.0)) throw ConfigError("shallow_water: parameter g must be > 0");
  SystemModel m;
  m.name = "shallow_water";
  m.n = 2;
  m.flux = [g](const Vec& w) {
    Vec f(2);
    f << w[1], w[1] * w[1] / w[0] + 0.5 * g * w[0] * w[0];
    return f;
  };
  m.jacobian = [g](const Vec& w) {
    const double u = w[1] / w[0];
    Mat a(2, 2);
    a << 0.0, 1.0, g * w[0] - u * u, 2.0 * u;
    return a;
  };
  m.entropy = [g](const Vec& w) {
    return 0.5 * w[1] * w[1] / w[0] + 0.5 * g * w[0] * w[0];
  };
  m.entropy_gradient = [g](const Vec& w) {
    const double u = w[1] / w[0];
    Vec grad(2);
    grad << g * w[0] - 0.5 * u * u, u;
    return grad;
  };
  m.entropy_hessian = [g](const Vec& w) {
    const double u = w[1] / w[0];
    Mat p(2, 2);
    p << u * u / w[0] + g, -u / w[0], -u / w[0], 1.0 / w[0];
    return p;
  };
  m.entropy_flux = [g](const Vec& w) {
    return 0.5 * w[1] * w[1] * w[1] / (w[0] * w[0]) + g * w[0] * w[1];
  };
  m.state_domain = [](const Vec& w) { return w[0] > 0.0; };
  return m;
}

inline std::vector<std::string> catalog_names() {
  return {"burgers", "p_system", "euler_ideal", "shallow_water"};
}

inline SystemModel catalog_lookup(const std::string& name, const Params& params = {}) {
  if (name == "burgers") {
    detail::reject_unknown_params(params, {}, name);
    return make_burgers();
  }
  if (name == "p_system") {
    detail::reject_unknown_params(params, {"k", "gamma"}, name);
    return make_p_system(detail::param_or(params, "k", 1.0),
                         detail::param_or(params, "gamma", 2.0));
  }
  if (name == "euler_ideal") {
    detail::reject_unknown_params(params, {"gamma"}, name);
    return make_euler_ideal(detail::param_or(params, "gamma", 1.4));
  }
  if (name == "shallow_water") {
    detail::reject_unknown_params(params, {"g"}, name);
    return make_shallow_water(detail::param_or(params, "g", 1.0));
  }
  throw ConfigError("unknown system '" + name + "'; catalog: burgers, p_system, "
                    "euler_ideal, shallow_water");
}

/// Closed-form 1-shock point (S, sigma) for catalog systems, used as the
/// oracle for traced curves. The coordinate pins the right state:
///   burgers: the right state value (<= left);  p_system: right v (<= left v);
///   euler_ideal: right pressure (>= left p);   shallow_water: right depth (>= left h).
inline std::pair<Vec, double> analytic_hugoniot(const std::string& name, const Params& params,
                                                const Vec& left, double coordinate) {
  if (name == "burgers") {
    const double ul = left[0];
    if (coordinate > ul)
      throw ContinuationError("analytic_hugoniot(burgers): target not on shock branch");
    Vec s(1);
    s << coordinate;
    return {s, 0.5 * (ul + coordinate)};
  }
  if (name == "p_system") {
    const double k = detail::param_or(params, "k", 1.0);
    const double gamma = detail::param_or(params, "gamma", 2.0);
    const double vl = left[0], ul = left[1];
    const double vr = coordinate;
    if (!(vr > 0.0) || vr > vl)
      throw ContinuationError("analytic_hugoniot(p_system): target not on shock branch");
    double sigma;
    if (vr == vl) {
      sigma = -std::sqrt(k * gamma * std::pow(vl, -gamma - 1.0));  // -c(v)
    } else {
      const double dp = k * (std::pow(vr, -gamma) - std::pow(vl, -gamma));
      sigma = -std::sqrt(dp / (vl - vr));
    }
    Vec s(2);
    s << vr, ul - sigma * (vr - vl);
    return {s, sigma};
  }
  if (name == "euler_ideal") {
    const double gamma = detail::param_or(params, "gamma", 1.4);
    const double rho_l = left[0];
    const double u_l = left[1] / left[0];
    const double p_l = (gamma - 1.0) * (left[2] - 0.5 * left[1] * left[1] / left[0]);
    const double pr = coordinate;
    if (!(pr >= p_l))
      throw ContinuationError("analytic_hugoniot(euler_ideal): target not on shock branch");
    const double mu2 = (gamma - 1.0) / (gamma + 1.0);
    const double ratio = pr / p_l;
    const double rho_r = rho_l * (ratio + mu2) / (mu2 * ratio + 1.0);
    const double big_a = 2.0 / ((gamma + 1.0) * rho_l);
    const double big_b = mu2 * p_l;
    const double u_r = u_l - (pr - p_l) * std::sqrt(big_a / (pr + big_b));
    const double c_l = std::sqrt(gamma * p_l / rho_l);
    const double q = std::sqrt(0.5 * (gamma + 1.0) / gamma * ratio +
                               0.5 * (gamma - 1.0) / gamma);
    const double sigma = u_l - c_l * q;
    Vec s(3);
    s << rho_r, rho_r * u_r, pr / (gamma - 1.0) + 0.5 * rho_r * u_r * u_r;
    return {s, sigma};
  }
  if (name == "shallow_water") {
    const double g = detail::param_or(params, "g", 1.0);
    const double hl = left[0];
    const double ul = left[1] / left[0];
    const double hr = coordinate;
    if (!(hr >= hl))
      throw ContinuationError("analytic_hugoniot(shallow_water): target not on shock branch");
    const double mass_flux = std::sqrt(0.5 * g * hl * hr * (hl + hr));
    const double sigma = ul - mass_flux / hl;
    const double ur = sigma + mass_flux / hr;
    Vec s(2);
    s << hr, hr * ur;
    return {s, sigma};
  }
  throw ConfigError("analytic_hugoniot: unknown system '" + name + "'");
}

/// Admissible sample states covering each catalog system's working range.
inline std::vector<Vec> standard_samples(const std::string& name) {
  std::vector<Vec> out;
  if (name == "burgers") {
    for (double u : {-2.0, -0.5, 0.0, 1.0, 3.0}) out.push_back(Vec::Constant(1, u));
  } else if (name == "p_system") {
    for (double v : {0.4, 1.0, 2.5})
      for (double u : {-1.0, 0.0, 1.5}) {
        Vec w(2);
        w << v, u;
        out.push_back(w);
      }
  } else if (name == "euler_ideal") {
    for (double rho : {0.5, 1.0, 2.0})
      for (double u : {-0.5, 0.0, 1.0})
        for (double p : {0.5, 1.0, 2.0}) {
          Vec w(3);
          w << rho, rho * u, p / 0.4 + 0.5 * rho * u * u;
          out.push_back(w);
        }
  } else if (name == "shallow_water") {
    for (double h : {0.4, 1.0, 2.5})
      for (double u : {-1.0, 0.0, 1.5}) {
        Vec w(2);
        w << h, h * u;
        out.push_back(w);
      }
  } else {
    throw ConfigError("standard_samples: unknown system '" + name + "'");
  }
  return out;
}

}  // namespace shockstab
