#pragma once

// Command-line front end. `run` parses arguments, dispatches to the library and
// returns the process exit code:
//   0 success / verified, 1 refuted or mismatch, 2 usage or input error,
//   3 resource bound exceeded.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "k3lat/config.hpp"
#include "k3lat/discriminant.hpp"
#include "k3lat/errors.hpp"
#include "k3lat/extensions.hpp"
#include "k3lat/lattice.hpp"
#include "k3lat/polynomial.hpp"
#include "k3lat/totality.hpp"
#include "k3lat/verification.hpp"
#include "k3lat/wronskian.hpp"

namespace k3lat::cli {

enum ExitCode : int { success = 0, refuted = 1, usage_error = 2, resource_error = 3 };

struct RunConfig {
  std::string format = "text";
  std::uint64_t max_elements = 10'000'000;
  std::size_t max_root_rank = 24;
  std::uint64_t seed = 0;
  int verbosity = 0;

  [[nodiscard]] EnumerationLimits limits() const {
    EnumerationLimits l;
    l.max_elements = max_elements;
    l.max_root_rank = max_root_rank;
    return l;
  }
  [[nodiscard]] bool json() const { return format == "json"; }
};

/// A lattice given by name ("E8", "8A2+U(2)", "K3") or by a JSON file
/// {"label": ..., "gram": [[...]]}.
inline Lattice resolve_lattice(const std::string& spec) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(spec, ec)) {
    std::ifstream in(spec);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw ParseError("cannot read lattice file '" + spec + "': " + e.what());
    }
    return lattice_from_json(j);
  }
  return parse_lattice(spec);
}

/// "1,1,1;0,1,2" -> generators.
inline std::vector<DiscriminantElement> parse_kernel(const std::string& text, std::size_t width) {
  std::vector<DiscriminantElement> out;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    if (group.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::int64_t> c;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      try {
        std::size_t used = 0;
        c.push_back(std::stoll(item, &used));
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw ParseError("");
      } catch (const std::exception&) {
        throw ParseError("bad kernel coefficient '" + item + "'");
      }
    }
    if (c.size() != width)
      throw ParseError("kernel generator has " + std::to_string(c.size()) + " coefficients, expected " +
                       std::to_string(width));
    out.push_back({std::move(c)});
  }
  if (out.empty()) throw ParseError("empty kernel");
  return out;
}

inline nlohmann::ordered_json form_json(const FiniteQuadraticForm& f) {
  nlohmann::ordered_json j;
  j["order"] = f.order();
  j["orders"] = f.orders();
  nlohmann::ordered_json q = nlohmann::ordered_json::array();
  for (const auto& v : f.q_values()) q.push_back(v.str());
  j["q"] = q;
  nlohmann::ordered_json b = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < f.generator_count(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < f.generator_count(); ++k) row.push_back(f.b_values()(i, k).str());
    b.push_back(row);
  }
  j["b"] = b;
  return j;
}

inline std::string form_text(const FiniteQuadraticForm& f) {
  if (f.generator_count() == 0) return "trivial";
  std::string s;
  for (std::size_t i = 0; i < f.generator_count(); ++i) s += (i ? " + " : "") + std::string("Z/") + std::to_string(f.orders()[i]);
  s += "; q = [";
  for (std::size_t i = 0; i < f.generator_count(); ++i) s += (i ? ", " : "") + f.q_values()[i].str();
  s += "]";
  bool off_diagonal = false;
  for (std::size_t i = 0; i < f.generator_count(); ++i)
    for (std::size_t k = 0; k < f.generator_count(); ++k)
      if (i != k && f.b_values()(i, k) != 0) off_diagonal = true;
  if (off_diagonal) {
    s += "; b = [";
    for (std::size_t i = 0; i < f.generator_count(); ++i) {
      s += i ? "; " : "";
      for (std::size_t k = 0; k < f.generator_count(); ++k) s += (k ? " " : "") + f.b_values()(i, k).str();
    }
    s += "]";
  }
  return s;
}

inline nlohmann::ordered_json signature_json(const Inertia& s) { return {s.positive, s.zero, s.negative}; }

inline std::string signature_string(const Inertia& s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

inline int lattice_info(const RunConfig& cfg, const std::string& spec, std::ostream& out) {
  const Lattice l = resolve_lattice(spec);
  std::optional<FiniteQuadraticForm> form;
  std::string reason;
  try {
    form = discr(l).form();
  } catch (const DomainError& e) {
    reason = e.what();
  }
  if (cfg.json()) {
    nlohmann::ordered_json j;
    j["label"] = l.label();
    j["rank"] = l.rank();
    j["determinant"] = l.determinant().str();
    j["signature"] = signature_json(l.signature());
    j["even"] = l.is_even();
    j["unimodular"] = l.is_unimodular();
    j["discriminant"] = form ? form_json(*form) : nlohmann::ordered_json(nullptr);
    if (!form) j["discriminant_note"] = reason;
    out << j.dump(2) << "\n";
  } else {
    out << "label: " << l.label() << "\nrank: " << l.rank() << "\ndeterminant: " << l.determinant()
        << "\nsignature: " << l.signature() << "\neven: " << (l.is_even() ? "true" : "false")
        << "\nunimodular: " << (l.is_unimodular() ? "true" : "false")
        << "\ndiscriminant: " << (form ? form_text(*form) : "undefined (" + reason + ")") << "\n";
  }
  return success;
}

inline int lattice_roots(const RunConfig& cfg, const std::string& spec, std::ostream& out) {
  const Lattice l = resolve_lattice(spec);
  auto rs = roots(l, cfg.limits());
  if (cfg.json()) {
    nlohmann::ordered_json j;
    j["label"] = l.label();
    j["count"] = rs.size();
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& r : rs) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (const auto& x : r) row.push_back(x.str());
      list.push_back(row);
    }
    j["roots"] = list;
    out << j.dump(2) << "\n";
  } else {
    out << "roots: " << rs.size() << "\n";
    for (const auto& r : rs) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? " " : "") << r[i];
      out << "\n";
    }
  }
  return success;
}

inline int discr_command(const RunConfig& cfg, const std::string& spec, std::ostream& out) {
  const Lattice l = resolve_lattice(spec);
  const auto d = discr(l);
  const auto& f = d.form();
  if (cfg.json()) {
    nlohmann::ordered_json j;
    j["label"] = l.label();
    j["order"] = f.order();
    j["form"] = form_json(f);
    j["invariant_factors"] = nlohmann::ordered_json::array();
    for (const auto& v : invariant_factors(f)) j["invariant_factors"].push_back(v.str());
    out << j.dump(2) << "\n";
  } else {
    out << "order: " << f.order() << "\nform: " << form_text(f) << "\ninvariant factors:";
    for (const auto& v : invariant_factors(f)) out << " " << v;
    out << "\n";
  }
  return success;
}

inline int extend_command(const RunConfig& cfg, const std::string& spec, const std::string& kernel_text,
                          std::ostream& out) {
  const Lattice l = resolve_lattice(spec);
  const auto d = discr(l);
  auto gens = parse_kernel(kernel_text, d.form().generator_count());
  auto kernel = make_kernel(d.form(), gens, cfg.limits());
  auto o = overlattice(d, kernel, cfg.limits());
  std::optional<QuasiPrimitivity> qp;
  if (l.rank() <= cfg.max_root_rank && is_root_system(l, cfg.limits())) qp = is_quasi_primitive(l, o, cfg.limits());
  const bool consistent = o.determinant_law_holds && o.discriminant_matches.value_or(true);
  if (cfg.json()) {
    nlohmann::ordered_json j;
    j["base"] = l.label();
    j["index"] = o.index;
    j["determinant"] = o.result.determinant().str();
    j["determinant_law"] = o.determinant_law_holds;
    j["discriminant_matches"] =
        o.discriminant_matches ? nlohmann::ordered_json(*o.discriminant_matches) : nlohmann::ordered_json(nullptr);
    j["gram"] = detail::matrix_json(o.result.gram());
    j["discriminant"] = form_json(discr(o.result).form());
    if (qp) {
      j["quasi_primitive"] = qp->quasi_primitive;
      j["roots"] = qp->extension_roots;
      if (qp->offending_root) j["offending_root"] = detail::rational_vector_json(*qp->offending_root);
    }
    out << j.dump(2) << "\n";
  } else {
    out << "index: " << o.index << "\ndeterminant: " << o.result.determinant()
        << "\ndeterminant law: " << (o.determinant_law_holds ? "holds" : "fails") << "\ndiscriminant matches K^perp/K: "
        << (o.discriminant_matches ? (*o.discriminant_matches ? "yes" : "no") : "not checked (too large)")
        << "\ndiscriminant: " << form_text(discr(o.result).form()) << "\ngram:\n"
        << o.result.gram();
    if (qp) {
      out << "quasi-primitive: " << (qp->quasi_primitive ? "yes" : "no") << " (" << qp->extension_roots
          << " roots, base " << qp->base_roots << ")\n";
    }
  }
  return consistent ? success : refuted;
}

inline int verify_command(const RunConfig& cfg, const std::string& which, std::ostream& out, std::ostream& err) {
  const auto limits = cfg.limits();
  std::vector<VerificationReport> reports;
  auto timed = [&](const char* name, auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = fn();
    if (cfg.verbosity > 0)
      err << name << ": " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
    return r;
  };
  if (which == "lemma31") {
    reports.push_back(timed("lemma31", [&] { return verify_lemma_3_1(limits); }));
  } else if (which == "lemma32") {
    reports.push_back(timed("lemma32", [&] { return verify_lemma_3_2(limits); }));
  } else if (which == "prop33") {
    reports.push_back(timed("prop33", [&] { return verify_prop_3_3(limits, cfg.seed); }));
  } else if (which == "theorem" || which == "all") {
    TheoremComponents parts{timed("lemma31", [&] { return verify_lemma_3_1(limits); }),
                            timed("lemma32", [&] { return verify_lemma_3_2(limits); }),
                            timed("prop33", [&] { return verify_prop_3_3(limits, cfg.seed); })};
    auto theorem = verify_final_theorem(parts);
    if (which == "all") {
      reports = {parts.lemma31, parts.lemma32, parts.prop33};
    }
    reports.push_back(std::move(theorem));
  } else {
    err << "unknown claim '" << which << "'; expected lemma31, lemma32, prop33, theorem or all\n";
    return usage_error;
  }

  if (cfg.json()) {
    if (which == "all") {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& r : reports) arr.push_back(to_json(r));
      out << arr.dump(2) << "\n";
    } else {
      out << to_json(reports.front()).dump(2) << "\n";
    }
  } else {
    for (const auto& r : reports) out << to_text(r);
  }
  bool partial = false, all_verified = true;
  for (const auto& r : reports) {
    partial = partial || r.status == Status::partial;
    all_verified = all_verified && r.verified();
  }
  if (all_verified) return success;
  return partial ? resource_error : refuted;
}

inline int cases_command(const RunConfig& cfg, std::int64_t degree, std::int64_t genus, std::ostream& out) {
  auto verdicts = case_analysis(degree, genus);
  if (cfg.json()) {
    nlohmann::ordered_json j;
    j["degree"] = degree;
    j["genus"] = genus;
    j["verdicts"] = nlohmann::ordered_json::array();
    for (const auto& v : verdicts) j["verdicts"].push_back(to_json(v));
    out << j.dump(2) << "\n";
  } else {
    out << "degree " << degree << ", genus " << genus << "\n";
    for (const auto& v : verdicts) {
      out << "(" << v.delta << "," << v.delta << "): " << to_string(v.verdict);
      if (v.cusps) out << ", k = " << *v.cusps;
      for (const auto& w : v.witnesses)
        out << "\n    " << w.description << ": " << w.lhs << " <= " << w.rhs << " " << (w.holds() ? "holds" : "fails");
      out << "\n";
    }
  }
  return success;
}

inline std::vector<Polynomial> parse_curve(const std::string& text) {
  std::vector<Polynomial> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_polynomial(item));
  }
  return out;
}

inline int wronskian_command(const RunConfig& cfg, const std::string& curve, const std::string& map,
                             std::ostream& out, std::ostream& err) {
  if (curve.empty() == map.empty()) {
    err << "wronskian: give exactly one of --curve or --map\n";
    return usage_error;
  }
  nlohmann::ordered_json j;
  std::ostringstream text;
  if (!curve.empty()) {
    auto polys = parse_curve(curve);
    Polynomial w = wronskian(polys);
    const bool real = flattening_points_all_real(polys);
    j["wronskian"] = to_string(w);
    j["flattening_points_all_real"] = real;
    text << "wronskian: " << w << "\nflattening points all real: " << (real ? "yes" : "no") << "\n";
  } else {
    const RationalMap f = RationalMap::parse(map);
    const Polynomial c = critical_polynomial(f);
    const auto reality = critical_point_reality(f);
    const auto phi = mobius_realifiable(f);
    const auto image = diagonal_image_bidegree(f);
    const bool distinct = critical_values_distinct(f);
    j["map"] = to_string(f);
    j["degree"] = f.degree();
    j["critical_polynomial"] = to_string(c);
    j["critical_points_all_real"] = reality.all_real;
    j["real_critical_points"] = reality.real;
    j["distinct_critical_points"] = reality.distinct;
    if (reality.used_real_representative) j["real_representative"] = true;
    j["realifiable"] = phi.has_value();
    if (phi) j["mobius"] = {to_string(phi->a), to_string(phi->b), to_string(phi->c), to_string(phi->d)};
    j["delta"] = image.delta();
    j["bidegree"] = {image.delta_x, image.delta_y};
    j["critical_values_distinct"] = distinct;
    text << "map: " << to_string(f) << "\ndegree: " << f.degree() << "\ncritical polynomial: " << c
         << "\ncritical points all real: " << (reality.all_real ? "yes" : "no") << " (" << reality.real << " of "
         << reality.distinct << ")" << (reality.used_real_representative ? " [real representative]" : "")
         << "\nrealifiable: " << (phi ? "yes, phi = " + to_string(*phi) : std::string("no"))
         << "\nimage bidegree: (" << image.delta_x << "," << image.delta_y << ")"
         << "\ncritical values distinct: " << (distinct ? "yes" : "no") << "\n";
  }
  if (cfg.json())
    out << j.dump(2) << "\n";
  else
    out << text.str();
  return success;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact lattice and real-algebraic verification toolkit", "k3lat"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--max-elements", cfg.max_elements, "Largest finite group enumerated element by element")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-root-rank", cfg.max_root_rank, "Largest rank for root enumeration")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for sampled checks");
  app.add_flag("-v,--verbose", cfg.verbosity, "Report timings on stderr");
  app.set_config("--config", "k3lat.toml", "Optional configuration file (TOML or INI)");

  std::string target;
  auto* lattice = app.add_subcommand("lattice", "Lattice invariants");
  lattice->require_subcommand(1);
  auto* info = lattice->add_subcommand("info", "Rank, determinant, signature, parity, discriminant form");
  info->add_option("lattice", target, "Name (E8, 8A2, U2, K3, 2E8+3U, <-4>, ...) or JSON file")->required();
  auto* rts = lattice->add_subcommand("roots", "All vectors of square -2");
  rts->add_option("lattice", target, "Name or JSON file")->required();

  auto* disc = app.add_subcommand("discr", "Discriminant form");
  disc->add_option("lattice", target, "Name or JSON file")->required();

  std::string kernel;
  auto* ext = app.add_subcommand("extend", "Overlattice from an isotropic kernel");
  ext->add_option("lattice", target, "Name or JSON file")->required();
  ext->add_option("--kernel", kernel, "Generators in discriminant coordinates, e.g. \"1,1,1\" or \"1,0;0,1\"")
      ->required();

  std::string claim;
  auto* ver = app.add_subcommand("verify", "Run a verification report");
  ver->add_option("claim", claim, "lemma31, lemma32, prop33, theorem or all")
      ->required()
      ->check(CLI::IsMember({"lemma31", "lemma32", "prop33", "theorem", "all"}));

  std::int64_t degree = 0, genus = 0;
  auto* cases = app.add_subcommand("cases", "Case analysis by degree and genus");
  cases->add_option("--degree", degree, "Degree of the map")->required();
  cases->add_option("--genus", genus, "Genus of the source curve")->required();

  std::string curve, map;
  auto* wr = app.add_subcommand("wronskian", "Wronskians and genus-0 rational maps");
  wr->add_option("--curve", curve, "Coordinates separated by ';', e.g. \"1; t; t^3\"");
  wr->add_option("--map", map, "Rational map p/q, e.g. \"(t^2-1)/t\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return usage_error;
  }

  try {
    if (info->parsed()) return lattice_info(cfg, target, out);
    if (rts->parsed()) return lattice_roots(cfg, target, out);
    if (disc->parsed()) return discr_command(cfg, target, out);
    if (ext->parsed()) return extend_command(cfg, target, kernel, out);
    if (ver->parsed()) return verify_command(cfg, claim, out, err);
    if (cases->parsed()) return cases_command(cfg, degree, genus, out);
    if (wr->parsed()) return wronskian_command(cfg, curve, map, out, err);
  } catch (const ResourceError& e) {
    err << "resource bound exceeded: " << e.what() << "\n";
    return resource_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return usage_error;
  }
  err << app.help();
  return usage_error;
}

}  // namespace k3lat::cli
