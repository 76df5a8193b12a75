#include "vpart/mip.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace vpart {
namespace {

std::string format_number(double value) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

std::string indexed(std::string_view prefix, std::initializer_list<int> ids) {
  std::string name(prefix);
  for (int id : ids) {
    name += '_';
    name += std::to_string(id);
  }
  return name;
}

int add_variable(MipModel& model, std::string name, VarKind kind, double cost,
                 double lower, double upper, int priority) {
  model.variables.push_back(
      {std::move(name), kind, cost, lower, upper, priority});
  return static_cast<int>(model.variables.size()) - 1;
}

void add_constraint(MipModel& model, std::string name,
                    std::vector<LinearTerm> terms, Relation relation,
                    double rhs) {
  model.constraints.push_back({std::move(name), std::move(terms), relation, rhs});
}

}  // namespace

MipModel build_mip(const Instance& instance, const DerivedCoefficients& d,
                   const MipOptions& options) {
  const int nt = instance.transaction_count();
  const int na = instance.attribute_count();
  const int ns = instance.site_count;
  const double lambda = instance.lambda;
  const bool latency = instance.p_latency.has_value();

  MipModel model;
  model.transactions = nt;
  model.attributes = na;
  model.sites = ns;

  // Pairs (t, a) whose u variables feed a latency row.
  Matrix<uint8_t> latency_use(nt, na, 0);
  if (latency) {
    for (const Query& query : instance.queries) {
      if (!query.is_write()) continue;
      for (int a : query.accessed_attributes) {
        latency_use(d.transaction_of[query.id], a) = 1;
      }
    }
  }

  model.x_index.resize(static_cast<std::size_t>(nt) * ns);
  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      model.x_index[t * ns + s] = add_variable(
          model, indexed("x", {t, s}), VarKind::kBinary, 0, 0, 1, 0);
    }
  }
  model.y_index.resize(static_cast<std::size_t>(na) * ns);
  for (int a = 0; a < na; ++a) {
    for (int s = 0; s < ns; ++s) {
      model.y_index[a * ns + s] =
          add_variable(model, indexed("y", {a, s}), VarKind::kBinary,
                       lambda * d.c2[a], 0, 1, 1);
    }
  }
  for (const auto& [a, s] : options.required_replicas) {
    if (a < 0 || a >= na || s < 0 || s >= ns) {
      throw ContractViolation("required replica out of range");
    }
    model.variables[model.y_var(a, s)].lower = 1;
  }
  model.u_index.assign(static_cast<std::size_t>(nt) * na * ns, -1);
  for (int t = 0; t < nt; ++t) {
    for (int a = 0; a < na; ++a) {
      const double cost = lambda * d.c1(a, t);
      if (options.compact && cost == 0 && d.c3(a, t) == 0 &&
          !latency_use(t, a)) {
        continue;
      }
      for (int s = 0; s < ns; ++s) {
        model.u_index[(static_cast<std::size_t>(t) * na + a) * ns + s] =
            add_variable(model, indexed("u", {t, a, s}), VarKind::kContinuous,
                         cost, 0, kInfinity, -1);
      }
    }
  }
  model.m_index = add_variable(model, "m", VarKind::kContinuous, 1.0 - lambda,
                               0, kInfinity, -1);
  model.psi_index.assign(instance.query_count(), -1);
  if (latency) {
    for (const Query& query : instance.queries) {
      if (!query.is_write()) continue;
      model.psi_index[query.id] = add_variable(
          model, indexed("psi", {query.id}), VarKind::kBinary,
          lambda * *instance.p_latency * query.frequency, 0, 1, 2);
    }
  }

  for (int t = 0; t < nt; ++t) {
    std::vector<LinearTerm> terms;
    for (int s = 0; s < ns; ++s) terms.push_back({model.x_var(t, s), 1.0});
    add_constraint(model, indexed("assign", {t}), std::move(terms),
                   Relation::kEqual, 1);
  }
  for (int a = 0; a < na; ++a) {
    std::vector<LinearTerm> terms;
    for (int s = 0; s < ns; ++s) terms.push_back({model.y_var(a, s), 1.0});
    add_constraint(model, indexed("cover", {a}), std::move(terms),
                   options.disjoint ? Relation::kEqual
                                    : Relation::kGreaterEqual,
                   1);
  }
  for (int a = 0; a < na; ++a) {
    for (int t = 0; t < nt; ++t) {
      if (options.compact && !d.phi(a, t)) continue;
      for (int s = 0; s < ns; ++s) {
        std::vector<LinearTerm> terms{{model.y_var(a, s), 1.0}};
        if (d.phi(a, t)) terms.push_back({model.x_var(t, s), -1.0});
        add_constraint(model, indexed("single", {a, t, s}), std::move(terms),
                       Relation::kGreaterEqual, 0);
      }
    }
  }
  for (int s = 0; s < ns; ++s) {
    std::vector<LinearTerm> terms;
    for (int t = 0; t < nt; ++t) {
      for (int a = 0; a < na; ++a) {
        const int u = model.u_var(t, a, s);
        if (u >= 0 && (d.c3(a, t) != 0 || !options.compact)) {
          terms.push_back({u, d.c3(a, t)});
        }
      }
    }
    for (int a = 0; a < na; ++a) {
      if (d.c4[a] != 0 || !options.compact) {
        terms.push_back({model.y_var(a, s), d.c4[a]});
      }
    }
    terms.push_back({model.m_index, -1.0});
    add_constraint(model, indexed("load", {s}), std::move(terms),
                   Relation::kLessEqual, 0);
  }
  for (int t = 0; t < nt; ++t) {
    for (int a = 0; a < na; ++a) {
      const double cost = lambda * d.c1(a, t);
      const bool wants_up = !options.compact || cost < 0 || latency_use(t, a);
      const bool wants_down =
          !options.compact || cost > 0 || d.c3(a, t) > 0;
      for (int s = 0; s < ns; ++s) {
        const int u = model.u_var(t, a, s);
        if (u < 0) continue;
        const int x = model.x_var(t, s);
        const int y = model.y_var(a, s);
        if (wants_up) {
          add_constraint(model, indexed("ux", {t, a, s}), {{u, 1}, {x, -1}},
                         Relation::kLessEqual, 0);
          add_constraint(model, indexed("uy", {t, a, s}), {{u, 1}, {y, -1}},
                         Relation::kLessEqual, 0);
        }
        if (wants_down) {
          add_constraint(model, indexed("uxy", {t, a, s}),
                         {{u, 1}, {x, -1}, {y, -1}}, Relation::kGreaterEqual,
                         -1);
        }
      }
    }
  }
  if (options.symmetry_breaking) {
    for (int t = 0; t < nt; ++t) {
      for (int s = 1; s < ns; ++s) {
        std::vector<LinearTerm> terms{{model.x_var(t, s), 1.0}};
        for (int prev = 0; prev < t; ++prev) {
          terms.push_back({model.x_var(prev, s - 1), -1.0});
        }
        add_constraint(model, indexed("order", {t, s}), std::move(terms),
                       Relation::kLessEqual, 0);
      }
    }
  }
  if (latency) {
    // psi_q * |A||S| >= remote replicas of the written attributes.
    const double big_m = static_cast<double>(na) * ns;
    for (const Query& query : instance.queries) {
      if (!query.is_write()) continue;
      const int t = d.transaction_of[query.id];
      std::vector<LinearTerm> terms{{model.psi_index[query.id], big_m}};
      for (int a : query.accessed_attributes) {
        for (int s = 0; s < ns; ++s) {
          terms.push_back({model.y_var(a, s), -1.0});
          terms.push_back({model.u_var(t, a, s), 1.0});
        }
      }
      add_constraint(model, indexed("latency", {query.id}), std::move(terms),
                     Relation::kGreaterEqual, 0);
    }
  }
  return model;
}

std::vector<double> lift(const MipModel& model, const Instance& instance,
                         const DerivedCoefficients& d,
                         const Partitioning& part) {
  std::vector<double> point(model.variables.size(), 0.0);
  for (int t = 0; t < model.transactions; ++t) {
    point[model.x_var(t, part.x[t])] = 1;
  }
  for (int a = 0; a < model.attributes; ++a) {
    part.y[a].for_each([&](int s) { point[model.y_var(a, s)] = 1; });
    for (int t = 0; t < model.transactions; ++t) {
      const int u = model.u_var(t, a, part.x[t]);
      if (u >= 0 && part.y[a].contains(part.x[t])) point[u] = 1;
    }
  }
  point[model.m_index] = evaluate(instance, d, part).max_load;
  if (instance.p_latency) {
    const auto psi = remote_write_flags(instance, d, part);
    for (int q = 0; q < instance.query_count(); ++q) {
      if (model.psi_index[q] >= 0) point[model.psi_index[q]] = psi[q];
    }
  }
  return point;
}

Partitioning decode(const MipModel& model, const std::vector<double>& point) {
  Partitioning part;
  part.x.resize(model.transactions);
  for (int t = 0; t < model.transactions; ++t) {
    int best = 0;
    for (int s = 1; s < model.sites; ++s) {
      if (point[model.x_var(t, s)] > point[model.x_var(t, best)]) best = s;
    }
    part.x[t] = best;
  }
  part.y.resize(model.attributes);
  for (int a = 0; a < model.attributes; ++a) {
    for (int s = 0; s < model.sites; ++s) {
      if (point[model.y_var(a, s)] > 0.5) part.y[a].insert(s);
    }
  }
  return part;
}

std::vector<std::string> violated_constraints(const MipModel& model,
                                              const std::vector<double>& point,
                                              double tolerance) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    const MipVariable& var = model.variables[j];
    const double v = point[j];
    const double tol = tolerance * std::max(1.0, std::abs(v));
    if (v < var.lower - tol || v > var.upper + tol ||
        (var.kind == VarKind::kBinary &&
         std::abs(v - std::round(v)) > tol)) {
      out.push_back(var.name);
    }
  }
  for (const MipConstraint& row : model.constraints) {
    double lhs = 0;
    double magnitude = std::abs(row.rhs);
    for (const LinearTerm& term : row.terms) {
      lhs += term.coef * point[term.var];
      magnitude += std::abs(term.coef * point[term.var]);
    }
    const double tol = tolerance * std::max(1.0, magnitude);
    const bool ok = row.relation == Relation::kLessEqual ? lhs <= row.rhs + tol
                    : row.relation == Relation::kGreaterEqual
                        ? lhs >= row.rhs - tol
                        : std::abs(lhs - row.rhs) <= tol;
    if (!ok) out.push_back(row.name);
  }
  return out;
}

double objective_value(const MipModel& model,
                       const std::vector<double>& point) {
  double sum = 0;
  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    sum += model.variables[j].cost * point[j];
  }
  return sum;
}

LpProblem relaxation(const MipModel& model) {
  LpProblem lp;
  for (const MipVariable& var : model.variables) {
    lp.add_column(var.cost, var.lower, var.upper);
  }
  for (int u : model.u_index) {
    if (u >= 0) lp.upper[u] = std::min(lp.upper[u], 1.0);
  }
  for (const MipConstraint& row : model.constraints) {
    lp.rows.push_back({row.terms, row.relation, row.rhs});
  }
  return lp;
}

double root_relaxation_value(const MipModel& model) {
  DualSimplex simplex(relaxation(model));
  const LpStatus status = simplex.solve();
  if (status == LpStatus::kInfeasible) return kInfinity;
  return simplex.objective();
}

ExportFormat parse_export_format(std::string_view name) {
  if (name == "mps") return ExportFormat::kFreeMps;
  if (name == "lp") return ExportFormat::kLp;
  throw std::invalid_argument("unsupported export format '" +
                              std::string(name) + "' (expected mps or lp)");
}

namespace {

std::string export_mps(const MipModel& model) {
  std::string out = "NAME vpart\nROWS\n N obj\n";
  for (const MipConstraint& row : model.constraints) {
    const char* type = row.relation == Relation::kLessEqual      ? " L "
                       : row.relation == Relation::kGreaterEqual ? " G "
                                                                 : " E ";
    out += type + row.name + "\n";
  }

  // Column-major view of the rows.
  std::vector<std::vector<std::pair<int, double>>> columns(
      model.variables.size());
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    for (const LinearTerm& term : model.constraints[i].terms) {
      columns[term.var].emplace_back(static_cast<int>(i), term.coef);
    }
  }

  out += "COLUMNS\n";
  bool in_integer_block = false;
  int marker = 0;
  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    const MipVariable& var = model.variables[j];
    const bool integer = var.kind == VarKind::kBinary;
    if (integer != in_integer_block) {
      out += " MARKER" + std::to_string(marker++) + " 'MARKER' " +
             (integer ? "'INTORG'\n" : "'INTEND'\n");
      in_integer_block = integer;
    }
    if (var.cost != 0) {
      out += " " + var.name + " obj " + format_number(var.cost) + "\n";
    }
    for (const auto& [row, coef] : columns[j]) {
      if (coef == 0) continue;
      out += " " + var.name + " " + model.constraints[row].name + " " +
             format_number(coef) + "\n";
    }
    if (var.cost == 0 && columns[j].empty()) {
      out += " " + var.name + " obj 0\n";
    }
  }
  if (in_integer_block) {
    out += " MARKER" + std::to_string(marker) + " 'MARKER' 'INTEND'\n";
  }

  out += "RHS\n";
  for (const MipConstraint& row : model.constraints) {
    if (row.rhs != 0) {
      out += " RHS " + row.name + " " + format_number(row.rhs) + "\n";
    }
  }

  out += "BOUNDS\n";
  for (const MipVariable& var : model.variables) {
    if (var.kind == VarKind::kBinary) {
      if (var.lower == var.upper) {
        out += " FX BND " + var.name + " " + format_number(var.lower) + "\n";
      } else {
        out += " BV BND " + var.name + "\n";
      }
      continue;
    }
    if (var.lower != 0) {
      out += " LO BND " + var.name + " " + format_number(var.lower) + "\n";
    }
    if (std::isfinite(var.upper)) {
      out += " UP BND " + var.name + " " + format_number(var.upper) + "\n";
    }
  }
  out += "ENDATA\n";
  return out;
}

void append_terms(std::string& out, const std::vector<LinearTerm>& terms,
                  const MipModel& model) {
  int on_line = 0;
  bool first = true;
  for (const LinearTerm& term : terms) {
    if (term.coef == 0) continue;
    if (on_line == 8) {
      out += "\n  ";
      on_line = 0;
    }
    const double magnitude = std::abs(term.coef);
    if (term.coef < 0) {
      out += first ? "-" : " - ";
    } else if (!first) {
      out += " + ";
    }
    if (magnitude != 1) out += format_number(magnitude) + " ";
    out += model.variables[term.var].name;
    first = false;
    ++on_line;
  }
  if (first) out += "0 " + model.variables.front().name;
}

std::string export_lp(const MipModel& model) {
  std::string out = "\\ vpart\nMinimize\n obj: ";
  std::vector<LinearTerm> objective;
  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    objective.push_back({static_cast<int>(j), model.variables[j].cost});
  }
  append_terms(out, objective, model);
  out += "\nSubject To\n";
  for (const MipConstraint& row : model.constraints) {
    out += " " + row.name + ": ";
    append_terms(out, row.terms, model);
    out += row.relation == Relation::kLessEqual      ? " <= "
           : row.relation == Relation::kGreaterEqual ? " >= "
                                                     : " = ";
    out += format_number(row.rhs) + "\n";
  }
  out += "Bounds\n";
  for (const MipVariable& var : model.variables) {
    if (var.kind == VarKind::kBinary) {
      if (var.lower == var.upper) {
        out += " " + var.name + " = " + format_number(var.lower) + "\n";
      }
      continue;
    }
    if (var.lower != 0 || std::isfinite(var.upper)) {
      out += " " + format_number(var.lower) + " <= " + var.name;
      if (std::isfinite(var.upper)) out += " <= " + format_number(var.upper);
      out += "\n";
    }
  }
  out += "Binaries\n";
  int on_line = 0;
  for (const MipVariable& var : model.variables) {
    if (var.kind != VarKind::kBinary) continue;
    out += " " + var.name;
    if (++on_line == 10) {
      out += "\n";
      on_line = 0;
    }
  }
  if (on_line != 0) out += "\n";
  out += "End\n";
  return out;
}

}  // namespace

std::string export_model(const MipModel& model, ExportFormat format) {
  return format == ExportFormat::kFreeMps ? export_mps(model)
                                          : export_lp(model);
}

}  // namespace vpart
