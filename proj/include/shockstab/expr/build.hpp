#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "shockstab/errors.hpp"
#include "shockstab/expr/jet.hpp"
#include "shockstab/expr/parse.hpp"
#include "shockstab/types.hpp"
#include "shockstab/validate.hpp"

namespace shockstab::expr {

/// Expression-defined system. Required keys: n, flux (n expressions),
/// entropy. Optional: name, state_names, params, entropy_flux, domain
/// (expressions required to be > 0 on admissible states),
/// validation_samples (states checked with validate_system at build time;
/// any failure aborts construction).
inline SystemModel build_system(const nlohmann::json& config) {
  if (!config.is_object()) throw ConfigError("system config must be an object");

  SystemModel model;
  try {
    model.name = config.value("name", std::string("expression_system"));
    if (!config.contains("n") || !config["n"].is_number_integer())
      throw ConfigError("system config: missing integer field 'n'");
    model.n = config["n"].get<int>();
    if (model.n < 1 || model.n > 8)
      throw ConfigError("system config: n must be between 1 and 8");

    SymbolTable sym;
    sym.n = model.n;
    if (config.contains("state_names")) {
      for (const auto& s : config["state_names"]) sym.state_names.push_back(s.get<std::string>());
      if (static_cast<int>(sym.state_names.size()) != model.n)
        throw ConfigError("system config: state_names must list exactly n names");
      std::set<std::string> uniq(sym.state_names.begin(), sym.state_names.end());
      if (static_cast<int>(uniq.size()) != model.n)
        throw ConfigError("system config: state_names must be distinct");
    }

    auto params = std::make_shared<ParamMap>();
    if (config.contains("params")) {
      for (const auto& [key, value] : config["params"].items())
        (*params)[key] = value.get<double>();
    }
    std::set<std::string> allowed;
    for (const auto& [key, value] : *params) {
      (void)value;
      allowed.insert(key);
    }
    sym.allowed_params = allowed;

    auto parse_field = [&](const std::string& src) { return parse(src, sym); };

    if (!config.contains("flux") || !config["flux"].is_array() ||
        static_cast<int>(config["flux"].size()) != model.n)
      throw ConfigError("system config: 'flux' must list exactly n expressions");
    auto flux_ast = std::make_shared<std::vector<ExprAst>>();
    for (const auto& s : config["flux"]) flux_ast->push_back(parse_field(s.get<std::string>()));

    if (!config.contains("entropy"))
      throw ConfigError("system config: missing field 'entropy'");
    auto entropy_ast = std::make_shared<ExprAst>(parse_field(config["entropy"].get<std::string>()));

    std::shared_ptr<ExprAst> q_ast;
    if (config.contains("entropy_flux"))
      q_ast = std::make_shared<ExprAst>(parse_field(config["entropy_flux"].get<std::string>()));

    auto domain_ast = std::make_shared<std::vector<ExprAst>>();
    if (config.contains("domain"))
      for (const auto& s : config["domain"]) domain_ast->push_back(parse_field(s.get<std::string>()));

    const int n = model.n;
    model.flux = [flux_ast, params, n](const Vec& u) {
      Vec f(n);
      for (int i = 0; i < n; ++i) f[i] = eval_value((*flux_ast)[i], u, *params);
      return f;
    };
    model.jacobian = [flux_ast, params, n](const Vec& u) {
      Mat a(n, n);
      for (int i = 0; i < n; ++i) a.row(i) = eval_jet((*flux_ast)[i], u, *params).gradient;
      return a;
    };
    model.entropy = [entropy_ast, params](const Vec& u) {
      return eval_value(*entropy_ast, u, *params);
    };
    model.entropy_gradient = [entropy_ast, params](const Vec& u) {
      return Vec(eval_jet(*entropy_ast, u, *params).gradient);
    };
    model.entropy_hessian = [entropy_ast, params](const Vec& u) {
      return eval_jet(*entropy_ast, u, *params).hessian.to_matrix();
    };
    if (q_ast)
      model.entropy_flux = [q_ast, params](const Vec& u) {
        return eval_value(*q_ast, u, *params);
      };
    if (!domain_ast->empty())
      model.state_domain = [domain_ast, params](const Vec& u) {
        try {
          for (const ExprAst& d : *domain_ast) {
            const double v = eval_value(d, u, *params);
            if (!(v > 0.0) || !std::isfinite(v)) return false;
          }
        } catch (const Error&) {
          return false;
        }
        return true;
      };
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("system config: ") + e.what());
  } catch (const ParseError& e) {
    throw ConfigError(std::string("system config: ") + e.what());
  }

  if (config.contains("validation_samples")) {
    std::vector<Vec> samples;
    for (const auto& row : config["validation_samples"]) {
      Vec u(model.n);
      if (static_cast<int>(row.size()) != model.n)
        throw ConfigError("system config: validation sample has wrong dimension");
      for (int i = 0; i < model.n; ++i) u[i] = row[i].get<double>();
      samples.push_back(std::move(u));
    }
    const ValidationReport report = validate_system(model, samples);
    if (!report.pass) {
      for (const SampleValidation& sv : report.samples)
        if (!sv.pass)
          throw ConfigError("system validation failed at state " + format_state(sv.state) +
                            ": " + sv.failure);
    }
  }
  return model;
}

}  // namespace shockstab::expr
