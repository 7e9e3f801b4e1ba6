#include "sofpid/rule_dump.hpp"

#include <cmath>

#include <fmt/format.h>

namespace sofpid::control {
namespace {

// Rounded to 4 decimals; values that round to zero lose their sign.
double round4(double v) {
  const double r = std::round(v * 1e4) / 1e4;
  return r == 0.0 ? 0.0 : r;
}

std::string format_vector(const almmo::Vector& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt::format("{:.4f}", round4(v[i]));
  }
  return out + "]";
}

// Signed linear form; the sign of every term after the first is spelled as an
// operator, matching "0.2171ε - 0.0017Σ + 0.0076Δ + 0.0761".
std::string format_affine(const almmo::Vector& coeffs, const std::vector<const char*>& symbols) {
  std::string out;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    const double c = round4(coeffs[i]);
    const char* sym = static_cast<std::size_t>(i) < symbols.size() ? symbols[i] : "";
    if (i == 0) {
      out += fmt::format("{:.4f}{}", c, sym);
    } else {
      out += fmt::format(" {} {:.4f}{}", std::signbit(c) ? '-' : '+', std::fabs(c), sym);
    }
  }
  return out;
}

std::vector<RuleRow> rows_for(const almmo::AlmmoModel& model, bool control_model) {
  std::vector<RuleRow> rows;
  for (std::size_t i = 0; i < model.rule_count(); ++i) {
    const auto& p = model.clouds()[i].prototype;
    const auto& a = model.consequents()[i].coeffs;
    RuleRow row;
    for (Eigen::Index k = 0; k < p.size(); ++k) row.prototype.push_back(round4(p[k]));
    for (Eigen::Index k = 0; k < a.size(); ++k) row.coeffs.push_back(round4(a[k]));
    row.text = control_model ? render_control_rule(p, a) : render_reference_rule(p, a);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string render_control_rule(const almmo::Vector& prototype, const almmo::Vector& coeffs) {
  return fmt::format("IF (x ~ {}) THEN (u = {})", format_vector(prototype),
                     format_affine(coeffs, {"ε", "Σ", "Δ", ""}));
}

std::string render_reference_rule(const almmo::Vector& prototype, const almmo::Vector& coeffs) {
  return fmt::format("IF (z ~ {}) THEN (û = {})", format_vector(prototype),
                     format_affine(coeffs, {"ε", "y", ""}));
}

RuleListing dump_rules(const SofPidController& controller) {
  RuleListing listing;
  if (controller.phase() != Phase::kRunning) return listing;
  listing.running = true;
  listing.control = rows_for(*controller.control_model(), true);
  listing.reference = rows_for(*controller.reference_model(), false);
  return listing;
}

nlohmann::json rules_to_json(const std::vector<RuleRow>& rows, bool control_model) {
  using nlohmann::json;
  json rules = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rules.push_back(json{{"index", i + 1},
                         {"prototype", rows[i].prototype},
                         {"coefficients", rows[i].coeffs},
                         {"text", rows[i].text}});
  }
  if (control_model) {
    return json{{"model", "control"},
                {"inputs", {"eps", "sigma", "delta"}},
                {"coefficients", {"P", "I", "D", "R"}},
                {"rules", std::move(rules)}};
  }
  return json{{"model", "reference"},
              {"inputs", {"eps", "y"}},
              {"coefficients", {"Q", "Y", "W"}},
              {"rules", std::move(rules)}};
}

std::string format_rule_table(const RuleListing& listing) {
  if (!listing.running) return "(controller still priming: no rules yet)\n";
  std::string out = "Control model rules\n";
  for (std::size_t i = 0; i < listing.control.size(); ++i) {
    out += fmt::format("{:>3}  {}\n", i + 1, listing.control[i].text);
  }
  out += "\nReference model rules\n";
  for (std::size_t i = 0; i < listing.reference.size(); ++i) {
    out += fmt::format("{:>3}  {}\n", i + 1, listing.reference[i].text);
  }
  return out;
}

}  // namespace sofpid::control
