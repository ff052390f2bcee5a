#include "nfcf/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nfcf/cfengine.hpp"
#include "nfcf/constants.hpp"
#include "nfcf/divchain.hpp"
#include "nfcf/fieldspec.hpp"

namespace nfcf {

namespace {

using json = nlohmann::ordered_json;

json ival(const Interval& x) { return json{{"lo", x.lo_string()}, {"hi", x.hi_string()}}; }
json elem(const NFElement& x) { return x.to_string(); }
json elems(const std::vector<NFElement>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(elem(x));
  return a;
}

struct Globals {
  long precision = kDefaultPrecision;
  std::optional<size_t> cap;
  bool as_json = false;
  std::uint64_t seed = 1;
};

struct PrimeArgs {
  std::string field = "Q";
  std::string p;
  int index = 0;
  std::optional<std::string> gen2;
  std::string floor = "auto";
  std::optional<std::string> M;
  std::optional<std::string> epsilon;
};

void add_prime_options(CLI::App* cmd, PrimeArgs& a) {
  cmd->add_option("--field", a.field, "field file, or Q");
  cmd->add_option("--p", a.p, "rational prime below the place")->required();
  cmd->add_option("--prime-index", a.index, "which prime above p");
  cmd->add_option("--gen2", a.gen2, "second generator: the prime (p, gen2)")->excludes("--prime-index");
  cmd->add_option("--floor", a.floor, "browkin, representative or auto")
      ->check(CLI::IsMember({"auto", "browkin", "representative"}));
  cmd->add_option("--M", a.M, "denominator bound override");
  cmd->add_option("--epsilon", a.epsilon, "epsilon override (rational)");
}

PrimeIdeal pick_prime(const FieldPtr& k, const mpz_class& p, int index) {
  auto ps = primes_above(k, p);
  if (index < 0 || index >= static_cast<int>(ps.size()))
    throw Error(Errc::InvalidInput, "prime index out of range: " + std::to_string(ps.size()) + " primes above " + p.get_str());
  return ps[static_cast<size_t>(index)];
}

struct BuiltType {
  TypeSpec type;
  std::optional<ConstantsReport> constants;
};

BuiltType build_type(const FieldSpec& spec, const PrimeArgs& a, long prec) {
  const mpz_class p(a.p);
  const std::string floor = a.floor == "auto" ? (spec.field->degree() == 1 ? "browkin" : "representative") : a.floor;
  if (floor == "browkin") {
    if (spec.field->degree() != 1) throw Error(Errc::InvalidInput, "the browkin floor needs the rationals");
    return {browkin_type(spec.field, p), std::nullopt};
  }
  if (!spec.units) throw Error(Errc::InvalidInput, spec.source + ": representative floor needs fundamental_units");
  auto prime = pick_prime(spec.field, p, a.index);
  if (a.gen2) {
    const auto wanted =
        FractionalIdeal::from_generators(spec.field, {NFElement::rational(spec.field, p), parse_element(spec.field, *a.gen2)});
    bool found = false;
    for (const auto& cand : primes_above(spec.field, p)) {
      if (cand.ideal == wanted) {
        prime = cand;
        found = true;
      }
    }
    if (!found) throw Error(Errc::InvalidInput, "(" + a.p + ", " + *a.gen2 + ") is not a prime ideal");
  }
  ConstantsOptions opts;
  opts.prec = prec;
  if (a.M) opts.M = mpz_class(*a.M);
  if (a.epsilon) opts.epsilon = parse_rational(*a.epsilon);
  opts.epsilon_prime_samples = {prime.norm};
  auto constants = compute_constants(*spec.units, opts, spec.name);
  auto type = representative_type(*spec.units, prime, constants);
  type.warnings.insert(type.warnings.begin(), constants.warnings.begin(), constants.warnings.end());
  return {std::move(type), std::move(constants)};
}

json constants_json(const ConstantsReport& r) {
  json j;
  j["field"] = r.field_id;
  j["abs_disc"] = r.abs_disc.get_str();
  j["signature"] = {r.r1, r.r2};
  j["minkowski_bound"] = ival(r.minkowski);
  j["c_K"] = ival(r.c_field);
  j["M"] = r.M.get_str();
  j["epsilon"] = ival(r.epsilon);
  if (r.epsilon_exact) j["epsilon_exact"] = r.epsilon_exact->get_str();
  j["rho_upper"] = ival(r.rho_upper);
  j["T0"] = ival(r.t0);
  j["c_MK"] = ival(r.c_mk);
  json ep = json::array();
  for (const auto& [q, v] : r.epsilon_prime_at) ep.push_back({{"q", q.get_str()}, {"epsilon_prime", ival(v)}});
  j["epsilon_prime"] = ep;
  return j;
}

json type_json(const TypeSpec& t) {
  json j;
  j["floor"] = t.floor->name();
  j["prime"] = t.prime.to_string();
  j["prime_norm"] = t.prime.norm.get_str();
  j["denominators"] = t.denom_set.size();
  if (t.nu_bound) j["nu_bound"] = ival(*t.nu_bound);
  return j;
}

json expansion_json(const CFExpansion& e) {
  json j;
  j["status"] = to_string(e.status);
  j["length"] = e.length();
  j["quotients"] = elems(e.quotients);
  if (e.status == CFStatus::Periodic) {
    j["preperiod"] = e.preperiod;
    j["period"] = e.period;
  }
  j["cap"] = e.cap;
  j["height_constant"] = ival(e.height_constant);
  j["c_alpha"] = e.c_alpha.get_str();
  json ledger = json::array();
  for (size_t n = 0; n < e.ledger.size(); ++n) {
    const auto& l = e.ledger[n];
    json row{{"n", n},
             {"alpha", elem(e.complete[n])},
             {"valuation", l.valuation},
             {"height_pow", ival(l.height.value())}};
    if (n < e.quotients.size()) row["quotient"] = elem(e.quotients[n]);
    if (l.nu) row["nu"] = ival(*l.nu);
    ledger.push_back(row);
  }
  j["ledger"] = ledger;
  return j;
}

json continuants_json(const Continuants& c) { return json{{"A", elems(c.A)}, {"B", elems(c.B)}}; }

void print_text(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    if (j.contains("lo") && j.contains("hi") && j.size() == 2) {
      out << prefix << ": [" << j["lo"].get<std::string>() << ", " << j["hi"].get<std::string>() << "]\n";
      return;
    }
    for (const auto& [k, v] : j.items()) print_text(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    const bool flat = std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
    if (flat) {
      out << prefix << ": [";
      for (size_t i = 0; i < j.size(); ++i) out << (i ? ", " : "") << (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
      out << "]\n";
    } else {
      for (size_t i = 0; i < j.size(); ++i) print_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

std::vector<NFElement> parse_list(const FieldPtr& k, const std::vector<std::string>& items) {
  std::vector<NFElement> out;
  for (const auto& s : items) out.push_back(parse_element(k, s));
  return out;
}

}  // namespace

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::SearchExhausted: return kExitExhausted;
    case Errc::CertificationFailed:
    case Errc::FloorFailure: return kExitAssertion;
    default: return kExitInput;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continued fractions and division chains over number fields", "nfcf"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--precision", g.precision, "working precision in bits")->check(CLI::Range(32L, 1L << 16));
  app.add_option("--cap", g.cap, "expansion length cap");
  app.add_flag("--json", g.as_json, "emit JSON");
  app.add_option("--seed", g.seed, "sampling seed");

  std::string field_path = "Q";
  auto* info = app.add_subcommand("field-info", "field data and validated units");
  info->add_option("--field", field_path, "field file, or Q")->required();

  std::optional<std::string> c_M, c_eps;
  bool use_bedocchi = false;
  std::vector<std::string> c_q;
  auto* cons = app.add_subcommand("constants", "M, epsilon, T0 and c(M,K)");
  cons->add_option("--field", field_path, "field file")->required();
  cons->add_option("--M", c_M, "override M");
  cons->add_option("--epsilon", c_eps, "override epsilon (rational)");
  cons->add_flag("--bedocchi", use_bedocchi, "use the file's refined M and epsilon");
  cons->add_option("--q", c_q, "norms at which to evaluate epsilon'");

  std::string table_dir;
  auto* table = app.add_subcommand("table1", "recompute a directory of field files");
  table->add_option("--dir", table_dir, "directory of field files")->required()->check(CLI::ExistingDirectory);

  PrimeArgs pa;
  std::string alpha_text;
  auto* exp = app.add_subcommand("expand", "continued fraction expansion with its ledger");
  add_prime_options(exp, pa);
  exp->add_option("--alpha", alpha_text, "element: rational or coordinate list")->required();

  size_t samples = 200;
  long range = 1000;
  std::optional<std::string> shift;
  auto* vf = app.add_subcommand("verify-floor", "check the floor axioms on random inputs");
  add_prime_options(vf, pa);
  vf->add_option("--samples", samples, "number of random inputs");
  vf->add_option("--range", range, "coordinate numerator range");
  vf->add_option("--shift", shift, "add this element to every floor value");
  auto* vt = app.add_subcommand("verify-type", "expand random inputs and check finiteness and nu");
  add_prime_options(vt, pa);
  vt->add_option("--samples", samples, "number of random inputs");
  vt->add_option("--range", range, "coordinate numerator range");

  std::string a_text, b_text;
  std::vector<std::string> s_primes, quotient_texts;
  std::optional<std::string> pi_text;
  ClwCaps caps;
  auto* dc = app.add_subcommand("divchain", "division chain for a/b in O_S");
  dc->add_option("--field", field_path, "field file, or Q");
  dc->add_option("a", a_text, "numerator")->required();
  dc->add_option("b", b_text, "denominator")->required();
  dc->add_option("--S", s_primes, "primes in S as p or p:index")->delimiter(',');
  dc->add_option("--pi", pi_text, "generator of the principal place in S");
  dc->add_option("--quotients", quotient_texts, "verify the chain of these quotients instead of searching")
      ->delimiter(';');
  dc->add_option("--shift-bound", caps.shift_bound, "step 1 shift bound");
  dc->add_option("--candidate-bound", caps.candidate_bound, "step 2 candidate bound");
  dc->add_option("--unit-bound", caps.unit_exponent_bound, "unit exponent bound");
  dc->add_option("--s-unit-bound", caps.s_unit_exponent_bound, "exponent bound for pi");

  std::vector<std::string> cf_texts;
  auto* ev = app.add_subcommand("evaluate", "value and continuants of a finite continued fraction");
  ev->add_option("--field", field_path, "field file, or Q");
  ev->add_option("quotients", cf_texts, "partial quotients")->required();

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitInput;
  }

  json report;
  std::string command;
  for (size_t i = 1; i < args.size(); ++i) command += (i > 1 ? " " : "") + args[i];
  report["command"] = command;
  report["precision"] = g.precision;
  json warnings = json::array();
  int rc = kExitOk;
  auto emit = [&] {
    report["warnings"] = warnings;
    report["exit_code"] = rc;
    if (g.as_json)
      out << report.dump(2) << "\n";
    else
      print_text(report, "", out);
  };
  auto note = [&](const std::vector<std::string>& ws) {
    for (const auto& w : ws) warnings.push_back(w);
  };

  try {
    if (info->parsed()) {
      auto spec = load_field_spec(field_path);
      note(spec.warnings);
      const auto& k = *spec.field;
      json j;
      j["name"] = spec.name;
      json poly = json::array();
      for (const auto& c : k.min_poly().coeffs()) poly.push_back(c.get_str());
      j["min_poly"] = poly;
      j["degree"] = k.degree();
      j["signature"] = {k.r1(), k.r2()};
      j["field_disc"] = k.disc().get_str();
      j["power_basis"] = k.power_basis();
      if (spec.units) {
        json us = json::array();
        for (const auto& u : spec.units->units) {
          json lg = json::array();
          for (const auto& l : log_embedding(u, g.precision)) lg.push_back(ival(l));
          us.push_back({{"unit", elem(u)}, {"norm", u.norm().get_str()}, {"log_embedding", lg}});
        }
        j["units"] = us;
        j["torsion_order"] = spec.units->torsion_order;
        if (spec.units->rank() > 0) j["T0"] = ival(t0(*spec.units, g.precision));
      }
      if (spec.class_data) {
        j["class_number"] = spec.class_data->class_number;
        j["class_group"] = spec.class_data->group;
        json reps = json::array();
        for (const auto& [ideal, cls] : spec.class_data->reps)
          reps.push_back({{"ideal", ideal.to_string()}, {"class", cls}});
        j["class_reps"] = reps;
      }
      report["field"] = j;
    } else if (cons->parsed()) {
      auto spec = load_field_spec(field_path);
      note(spec.warnings);
      if (!spec.units) throw Error(Errc::InvalidInput, spec.source + ": constants need fundamental_units");
      ConstantsOptions opts;
      opts.prec = g.precision;
      if (use_bedocchi) {
        if (!spec.bedocchi_M) throw Error(Errc::InvalidInput, spec.source + ": no bedocchi block");
        opts.M = spec.bedocchi_M;
        opts.epsilon = spec.bedocchi_epsilon;
      }
      if (c_M) opts.M = mpz_class(*c_M);
      if (c_eps) opts.epsilon = parse_rational(*c_eps);
      for (const auto& q : c_q) opts.epsilon_prime_samples.emplace_back(q);
      auto r = compute_constants(*spec.units, opts, spec.name);
      note(r.warnings);
      report["constants"] = constants_json(r);
      if (!opts.M && !opts.epsilon && spec.expected_M) {
        const bool match = r.M == *spec.expected_M;
        report["check"] = {{"expected_M", spec.expected_M->get_str()}, {"M_matches", match}};
        if (!match) rc = kExitAssertion;
      }
    } else if (table->parsed()) {
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(table_dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      json rows = json::array();
      bool all_match = true;
      for (const auto& f : files) {
        json row;
        row["file"] = f.filename().string();
        try {
          auto spec = load_field_spec(f.string());
          const auto& k = *spec.field;
          json poly = json::array();
          for (const auto& c : k.min_poly().coeffs()) poly.push_back(c.get_str());
          row["min_poly"] = poly;
          row["class_number"] = spec.class_data ? spec.class_data->class_number : 0;
          row["signature"] = {k.r1(), k.r2()};
          row["abs_disc"] = k.abs_disc().get_str();
          const mpz_class M = choose_M(k);
          row["M"] = M.get_str();
          if (spec.expected_M) {
            row["M_reference"] = spec.expected_M->get_str();
            row["M_matches"] = M == *spec.expected_M;
            all_match = all_match && M == *spec.expected_M;
          }
          if (spec.units) {
            ConstantsOptions opts;
            opts.prec = g.precision;
            auto r = compute_constants(*spec.units, opts, spec.name);
            row["c_MK"] = ival(r.c_mk);
            const Interval alt = c_MK(r.M, k.degree(), r.epsilon, t0_complex_weight_one(*spec.units, g.precision));
            row["c_MK_complex_weight_one"] = ival(alt);
            if (spec.expected_c_mk) {
              row["c_MK_reference"] = *spec.expected_c_mk;
              const double reference = std::stod(*spec.expected_c_mk);
              row["c_MK_relative_deviation"] = (r.c_mk.mid_double() - reference) / reference;
              row["c_MK_complex_weight_one_relative_deviation"] = (alt.mid_double() - reference) / reference;
            }
          } else {
            row["flag"] = "no fundamental units; c(M,K) not computed";
          }
        } catch (const Error& e) {
          row["flag"] = e.what();
        }
        rows.push_back(row);
      }
      report["rows"] = rows;
      report["M_column_matches"] = all_match;
      if (!all_match) rc = kExitAssertion;
    } else if (exp->parsed()) {
      auto spec = load_field_spec(pa.field);
      auto built = build_type(spec, pa, g.precision);
      note(built.type.warnings);
      auto alpha = parse_element(spec.field, alpha_text);
      auto e = expand(alpha, built.type, g.cap, g.precision);
      report["type"] = type_json(built.type);
      report["alpha"] = elem(alpha);
      report["expansion"] = expansion_json(e);
      if (e.status == CFStatus::Finite) report["value"] = elem(evaluate_cf(e.quotients));
      auto inv = check_expansion_invariants(e, built.type);
      auto hc = check_height_chain(e);
      report["checks"] = {{"invariants", inv.checks},
                          {"invariant_failures", inv.failures},
                          {"height_chain_checked", hc.checked},
                          {"height_chain_violations", hc.violations}};
      if (!inv.ok() || !hc.ok()) rc = kExitAssertion;
    } else if (vf->parsed() || vt->parsed()) {
      auto spec = load_field_spec(pa.field);
      auto built = build_type(spec, pa, g.precision);
      note(built.type.warnings);
      if (shift) {
        built.type.floor = std::make_shared<ShiftedFloor>(built.type.floor, parse_element(spec.field, *shift));
      }
      std::mt19937_64 rng(g.seed);
      auto xs = sample_elements(spec.field, built.type.prime.p, samples, rng, range, 3);
      report["type"] = type_json(built.type);
      report["seed"] = g.seed;
      if (vf->parsed()) {
        auto r = verify_floor_axioms(built.type, xs, rng);
        report["floor_axioms"] = {{"samples", r.samples},
                                  {"failures", r.failures},
                                  {"ok", r.ok()},
                                  {"details", r.details}};
        if (!r.ok()) rc = kExitAssertion;
      } else {
        auto r = verify_type_criterion(built.type, xs, g.cap);
        json j{{"expansions", r.expansions},
               {"finite", r.finite},
               {"periodic", r.periodic},
               {"truncated", r.truncated},
               {"nu_at_least_one", r.nu_at_least_one},
               {"nu_above_bound", r.nu_above_bound},
               {"nu_finite_factor_violations", r.nu_finite_factor_violations},
               {"height_violations", r.height_violations},
               {"invariant_failures", r.invariant_failures},
               {"ok", r.ok()},
               {"details", r.details}};
        if (r.nu_sup) j["nu_sup"] = ival(*r.nu_sup);
        report["type_criterion"] = j;
        if (!r.ok()) rc = kExitAssertion;
      }
    } else if (dc->parsed()) {
      auto spec = load_field_spec(field_path);
      note(spec.warnings);
      const FieldPtr& k = spec.field;
      std::vector<PrimeIdeal> s;
      for (const auto& item : s_primes) {
        const auto colon = item.find(':');
        const mpz_class p(item.substr(0, colon));
        const int index = colon == std::string::npos ? 0 : std::stoi(item.substr(colon + 1));
        s.push_back(pick_prime(k, p, index));
      }
      SIntegerRing ring(k, s);
      auto a = parse_element(k, a_text), b = parse_element(k, b_text);
      json ring_j = json::array();
      for (const auto& p : s) ring_j.push_back(p.to_string());
      report["S"] = ring_j;
      if (spec.class_data) {
        const bool passes = class_obstruction(a, b, ring, &*spec.class_data);
        report["class_obstruction_passes"] = passes;
        if (!passes) {
          report["chain"] = nullptr;
          report["reason"] = "(a, b) is not principal in Cl(O_S): no division chain exists";
          rc = kExitAssertion;
          emit();
          return rc;
        }
      }
      auto search = [&] {
        if (!quotient_texts.empty()) return cf_to_chain(ring, a, b, parse_list(k, quotient_texts));
        if (!spec.units) throw Error(Errc::InvalidInput, spec.source + ": divchain search needs fundamental_units");
        std::optional<NFElement> pi;
        if (pi_text) pi = parse_element(k, *pi_text);
        return clw_expand(a, b, ring, *spec.units, pi, caps);
      };
      const DivisionChain chain = search();
      json steps = json::array();
      for (const auto& st : chain.steps) steps.push_back({{"q", elem(st.q)}, {"r", elem(st.r)}});
      report["chain"] = {{"a", elem(a)}, {"b", elem(b)}, {"steps", steps}, {"length", chain.length()},
                         {"terminating", chain.terminating()}};
      auto v = verify_chain(chain);
      json vj{{"valid", v.valid}};
      if (v.failing_step) vj["failing_step"] = *v.failing_step;
      if (!v.reason.empty()) vj["reason"] = v.reason;
      report["verification"] = vj;
      auto cfq = chain_to_cf(chain);
      auto cont = continuants(cfq);
      report["continued_fraction"] = elems(cfq);
      report["continuants"] = continuants_json(cont);
      report["determinant_holds"] = continuant_determinant_holds(cont);
      if (!v.valid || !chain.terminating() || !continuant_determinant_holds(cont)) rc = kExitAssertion;
    } else if (ev->parsed()) {
      auto spec = load_field_spec(field_path);
      auto qs = parse_list(spec.field, cf_texts);
      auto cont = continuants(qs);
      report["quotients"] = elems(qs);
      report["value"] = elem(evaluate_cf(qs));
      report["continuants"] = continuants_json(cont);
      report["determinant_holds"] = continuant_determinant_holds(cont);
      if (!continuant_determinant_holds(cont)) rc = kExitAssertion;
    }
  } catch (const Error& e) {
    rc = exit_code_for(e.code());
    report["error"] = {{"code", std::string(errc_name(e.code()))}, {"message", e.what()}};
    err << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    rc = kExitInput;
    report["error"] = {{"code", "InvalidInput"}, {"message", e.what()}};
    err << e.what() << "\n";
  }
  emit();
  return rc;
}

}  // namespace nfcf
