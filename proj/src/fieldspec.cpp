#include "nfcf/fieldspec.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "nfcf/error.hpp"
#include "nfcf/ideals.hpp"

namespace nfcf {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& source, const std::string& key, const std::string& what) {
  throw Error(Errc::InvalidInput, source + ": " + key + ": " + what);
}

mpq_class rational_of(const json& v, const std::string& source, const std::string& key) {
  if (v.is_number_integer()) return mpq_class(mpz_class(v.dump()));
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const std::exception&) {
      bad(source, key, "not a rational: " + v.get<std::string>());
    }
  }
  bad(source, key, "expected an integer or a rational string");
}

QVec vector_of(const json& v, const std::string& source, const std::string& key) {
  if (!v.is_array()) bad(source, key, "expected an array");
  QVec out;
  for (const auto& c : v) out.push_back(rational_of(c, source, key));
  return out;
}

NFElement element_of(const FieldPtr& k, const json& v, const std::string& source, const std::string& key) {
  QVec c = vector_of(v, source, key);
  if (static_cast<int>(c.size()) > k->degree()) bad(source, key, "too many coordinates");
  c.resize(static_cast<size_t>(k->degree()), 0);
  return NFElement(k, std::move(c));
}

ClassData class_data_of(const json& j, const FieldPtr& k, const std::string& source) {
  ClassData data;
  data.class_number = j.at("class_number").get<long>();
  if (data.class_number < 1) bad(source, "class_number", "must be positive");
  if (j.contains("class_group")) {
    for (const auto& g : j.at("class_group")) {
      const long order = g.get<long>();
      if (order < 2) bad(source, "class_group", "factor orders must be at least 2");
      data.group.push_back(order);
    }
  }
  const long size = std::accumulate(data.group.begin(), data.group.end(), 1L, std::multiplies<>());
  if (size != data.class_number) bad(source, "class_group", "order does not match class_number");
  if (j.contains("ideal_class_reps")) {
    for (const auto& rep : j.at("ideal_class_reps")) {
      std::vector<NFElement> gens;
      for (const auto& g : rep.at("generators")) gens.push_back(element_of(k, g, source, "ideal_class_reps"));
      if (gens.empty()) bad(source, "ideal_class_reps", "empty generator list");
      auto ideal = FractionalIdeal::from_generators(k, gens);
      if (!ideal.is_integral()) bad(source, "ideal_class_reps", "representatives must be integral");
      std::vector<long> cls = rep.at("class").get<std::vector<long>>();
      if (cls.size() != data.group.size()) bad(source, "ideal_class_reps", "class vector has wrong length");
      for (size_t i = 0; i < cls.size(); ++i)
        if (cls[i] < 0 || cls[i] >= data.group[i]) bad(source, "ideal_class_reps", "class entry out of range");
      data.reps.emplace_back(std::move(ideal), std::move(cls));
    }
  }
  if (data.class_number > 1) {
    // every generator of the group needs a representative
    for (size_t i = 0; i < data.group.size(); ++i) {
      bool found = false;
      for (const auto& [ideal, cls] : data.reps) {
        bool unit_vector = true;
        for (size_t t = 0; t < cls.size(); ++t) unit_vector = unit_vector && cls[t] == (t == i ? 1 : 0);
        found = found || unit_vector;
      }
      if (!found) bad(source, "ideal_class_reps", "no representative for generator " + std::to_string(i));
    }
  }
  return data;
}

}  // namespace

mpq_class parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t += c;
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  mpq_class q;
  if (t.empty() || q.set_str(t, 10) != 0) throw Error(Errc::InvalidInput, "not a rational: " + text);
  if (q.get_den() == 0) throw Error(Errc::InvalidInput, "zero denominator: " + text);
  q.canonicalize();
  return q;
}

FieldSpec parse_field_spec(const std::string& json_text, const std::string& source) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(source, "<file>", e.what());
  }
  if (!j.is_object()) bad(source, "<file>", "expected an object");
  FieldSpec spec;
  spec.source = source;
  spec.name = j.value("name", source);
  try {
    if (!j.contains("min_poly")) bad(source, "min_poly", "missing");
    QPoly f(vector_of(j.at("min_poly"), source, "min_poly"));
    std::optional<QMat> basis;
    if (j.contains("integral_basis")) {
      QMat rows;
      for (const auto& r : j.at("integral_basis")) {
        QVec row = vector_of(r, source, "integral_basis");
        row.resize(static_cast<size_t>(f.degree()), 0);
        rows.push_back(std::move(row));
      }
      basis = std::move(rows);
    }
    std::optional<mpz_class> disc;
    if (j.contains("field_disc")) disc = mpz_class(j.at("field_disc").dump());
    spec.field = NumberField::create(f, basis, disc);
    const FieldPtr& k = spec.field;

    if (j.contains("fundamental_units")) {
      std::vector<NFElement> units;
      for (const auto& u : j.at("fundamental_units")) units.push_back(element_of(k, u, source, "fundamental_units"));
      int order = 2;
      std::optional<NFElement> gen;
      if (j.contains("torsion")) {
        const auto& t = j.at("torsion");
        order = t.is_object() ? t.at("order").get<int>() : t.get<int>();
        if (t.is_object() && t.contains("generator")) gen = element_of(k, t.at("generator"), source, "torsion");
      }
      spec.units = UnitSystem::make(k, std::move(units), order, gen);
    } else {
      spec.warnings.push_back("no fundamental units: unit-dependent constants unavailable");
    }
    if (j.contains("class_number")) spec.class_data = class_data_of(j, k, source);
    if (j.contains("bedocchi")) {
      const auto& b = j.at("bedocchi");
      spec.bedocchi_M = mpz_class(b.at("M").dump());
      spec.bedocchi_epsilon = rational_of(b.at("epsilon"), source, "bedocchi.epsilon");
    }
    if (j.contains("expected")) {
      const auto& e = j.at("expected");
      if (e.contains("M")) spec.expected_M = mpz_class(e.at("M").dump());
      if (e.contains("c_MK")) spec.expected_c_mk = e.at("c_MK").get<std::string>();
    }
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidInput) throw;
    throw Error(e.code(), source + ": " + e.what());
  } catch (const json::exception& e) {
    bad(source, "<file>", e.what());
  }
  return spec;
}

FieldSpec load_field_spec(const std::string& path) {
  if (path == "Q") {
    FieldSpec spec;
    spec.name = "Q";
    spec.source = "Q";
    spec.field = NumberField::create(QPoly::from_ints({0, 1}));
    spec.units = UnitSystem::make(spec.field, {});
    spec.class_data = ClassData{};
    return spec;
  }
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInput, "cannot open field file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_field_spec(text.str(), path);
}

}  // namespace nfcf
