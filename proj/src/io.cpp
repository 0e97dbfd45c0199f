#include "pingcert/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pingcert/errors.hpp"

namespace pingcert {

namespace {

using Json = nlohmann::ordered_json;

Json rational(const Rational& x) { return format_rational(x); }

Rational to_rational(const Json& j, const char* what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  throw InvalidInput(std::string(what) + ": expected a fraction string");
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Json interval(const RationalInterval& x) { return Json::array({rational(x.lo), rational(x.hi)}); }

RationalInterval to_interval(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw InvalidInput(std::string(what) + ": expected [lo, hi]");
  return {to_rational(j[0], what), to_rational(j[1], what)};
}

Json matrix(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(rational(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Matrix to_matrix(const Json& j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) throw InvalidInput("matrix must have dim rows");
  std::vector<Rational> entries;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != dim) throw InvalidInput("matrix rows must have dim entries");
    for (const auto& x : row) entries.push_back(to_rational(x, "matrix entry"));
  }
  return Matrix(dim, std::move(entries));
}

Json vec(const ProjPoint& p) {
  Json a = Json::array();
  for (const auto& x : p.vec()) a.push_back(rational(x));
  return a;
}

ProjPoint to_point(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("projective point must be a nonempty array");
  Vector v;
  for (const auto& x : j) v.push_back(to_rational(x, "point coordinate"));
  return ProjPoint(std::move(v));
}

Json word(const Word& w) {
  Json a = Json::array();
  for (long k : w.signed_indices()) a.push_back(k);
  return a;
}

Word to_word(const Json& j, const GeneratorSetPtr& s) {
  if (!j.is_array()) throw InvalidInput("word must be an array of signed indices");
  std::vector<long> idx;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw InvalidInput("word entries must be integers");
    idx.push_back(x.get<long>());
  }
  return Word::from_signed(s, idx);
}

Json witness(const ContractionWitness& w) {
  Json j;
  j["epsilon"] = rational(w.epsilon);
  j["r"] = rational(w.r);
  j["v"] = vec(w.v);
  j["H"] = vec(w.H);
  j["frame_error"] = rational(w.frame_error);
  j["sv_ratio"] = interval(w.sv_ratio);
  j["gram_top_lo"] = rational(w.gram_top_lo);
  j["gram_second_hi"] = rational(w.gram_second_hi);
  return j;
}

ContractionWitness to_witness(const Json& j) {
  ContractionWitness w;
  w.epsilon = to_rational(field(j, "epsilon"), "epsilon");
  w.r = to_rational(field(j, "r"), "r");
  w.v = to_point(field(j, "v"));
  w.H = to_point(field(j, "H"));
  w.frame_error = to_rational(field(j, "frame_error"), "frame_error");
  w.sv_ratio = to_interval(field(j, "sv_ratio"), "sv_ratio");
  w.gram_top_lo = to_rational(field(j, "gram_top_lo"), "gram_top_lo");
  w.gram_second_hi = to_rational(field(j, "gram_second_hi"), "gram_second_hi");
  return w;
}

Json very_proximal(const VeryProximalWitness& w) {
  Json j;
  j["forward"] = witness(w.forward);
  j["backward"] = witness(w.backward);
  return j;
}

VeryProximalWitness to_very_proximal(const Json& j) {
  return {to_witness(field(j, "forward")), to_witness(field(j, "backward"))};
}

Json generators(const GeneratorSet& s) {
  Json j;
  j["dim"] = s.dim();
  Json g = Json::array();
  for (const auto& m : s.matrices()) g.push_back(matrix(m));
  j["generators"] = g;
  j["flags"] = {{"symmetric", s.symmetric()}, {"contains_identity", s.contains_identity()}};
  return j;
}

GeneratorSetPtr to_generators(const Json& j) {
  const Json& dj = field(j, "dim");
  if (!dj.is_number_integer() || dj.get<long long>() < 1) throw InvalidInput("dim must be a positive integer");
  std::size_t dim = dj.get<std::size_t>();
  const Json& gj = field(j, "generators");
  if (!gj.is_array() || gj.empty()) throw InvalidInput("generators must be a nonempty array");
  std::vector<Matrix> mats;
  for (const auto& m : gj) mats.push_back(to_matrix(m, dim));
  auto s = make_generator_set(std::move(mats));
  if (j.contains("flags")) {
    const Json& f = j.at("flags");
    if (!f.is_object()) throw InvalidInput("flags must be an object");
    if (f.contains("symmetric") && f.at("symmetric").get<bool>() != s->symmetric())
      throw InvalidInput("flag symmetric disagrees with the generators");
    if (f.contains("contains_identity") && f.at("contains_identity").get<bool>() != s->contains_identity())
      throw InvalidInput("flag contains_identity disagrees with the generators");
  }
  return s;
}

Json representation(const Representation& r) {
  Json j;
  j["conjugator"] = matrix(r.conjugator);
  j["wedge"] = r.wedge;
  return j;
}

Representation to_representation(const Json& j, std::size_t dim) {
  const Json& w = field(j, "wedge");
  if (!w.is_number_integer() || w.get<long long>() < 1) throw InvalidInput("wedge must be a positive integer");
  return {to_matrix(field(j, "conjugator"), dim), w.get<std::size_t>()};
}

Json header(const char* kind, const GeneratorSet& s, const Representation& rep) {
  Json j;
  j["format"] = "pingcert-certificate";
  j["version"] = kCertificateVersion;
  j["kind"] = kind;
  j["generators"] = generators(s);
  j["representation"] = representation(rep);
  return j;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

GeneratorSetPtr parse_generators(const std::string& text) {
  try {
    return to_generators(parse_json(text));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad generating set: ") + e.what());
  }
}

std::string generators_json(const GeneratorSet& s) { return dump(generators(s)); }

std::string certificate_json(const SemigroupCertificate& c) {
  Json j = header("semigroup", *c.generators, c.rep);
  j["a"] = word(c.a);
  j["b"] = word(c.b);
  j["b_prime"] = word(c.b_prime);
  j["epsilon"] = rational(c.epsilon);
  j["r"] = rational(c.r);
  j["witness_a"] = witness(c.witness_a);
  j["bv_h_distance_sq"] = rational(c.bv_h_distance_sq);
  j["bv_v_distance_sq"] = rational(c.bv_v_distance_sq);
  j["lip_b"] = {{"lip_hi", rational(c.lip_b.lip_hi)}, {"x_hi", rational(c.lip_b.x_hi)}, {"y_hi", rational(c.lip_b.y_hi)}};
  j["found_in_power"] = c.found_in_power;
  return dump(j);
}

std::string certificate_json(const FreeGroupCertificate& c) {
  Json j = header("free", *c.generators, c.rep);
  j["a"] = word(c.a);
  j["b"] = word(c.b);
  j["epsilon"] = rational(c.epsilon);
  j["r"] = rational(c.r);
  j["witness_a"] = very_proximal(c.witness_a);
  j["witness_b"] = very_proximal(c.witness_b);
  Json cross = Json::object();
  for (std::size_t k = 0; k < 8; ++k) cross[kCrossNames[k]] = rational(c.cross_separations[k]);
  j["cross_separations_sq"] = cross;
  j["found_in_power"] = c.found_in_power;
  return dump(j);
}

std::string certificate_json(const AnyCertificate& c) {
  return std::visit([](const auto& x) { return certificate_json(x); }, c);
}

AnyCertificate parse_certificate(const std::string& text) {
  try {
    Json j = parse_json(text);
    if (field(j, "format") != "pingcert-certificate") throw InvalidInput("not a pingcert certificate");
    if (field(j, "version") != kCertificateVersion) throw InvalidInput("unsupported certificate version");
    auto s = to_generators(field(j, "generators"));
    Representation rep = to_representation(field(j, "representation"), s->dim());
    std::string kind = field(j, "kind").get<std::string>();
    const Json& fp = field(j, "found_in_power");
    if (!fp.is_number_integer()) throw InvalidInput("found_in_power must be an integer");
    if (kind == "semigroup") {
      const Json& lip = field(j, "lip_b");
      SemigroupCertificate c{s,
                             rep,
                             to_word(field(j, "a"), s),
                             to_word(field(j, "b"), s),
                             to_word(field(j, "b_prime"), s),
                             to_rational(field(j, "epsilon"), "epsilon"),
                             to_rational(field(j, "r"), "r"),
                             to_witness(field(j, "witness_a")),
                             to_rational(field(j, "bv_h_distance_sq"), "bv_h_distance_sq"),
                             to_rational(field(j, "bv_v_distance_sq"), "bv_v_distance_sq"),
                             {to_rational(field(lip, "lip_hi"), "lip_hi"), to_rational(field(lip, "x_hi"), "x_hi"),
                              to_rational(field(lip, "y_hi"), "y_hi")},
                             fp.get<int>()};
      return c;
    }
    if (kind == "free") {
      FreeGroupCertificate c{s,
                             rep,
                             to_word(field(j, "a"), s),
                             to_word(field(j, "b"), s),
                             to_rational(field(j, "epsilon"), "epsilon"),
                             to_rational(field(j, "r"), "r"),
                             to_very_proximal(field(j, "witness_a")),
                             to_very_proximal(field(j, "witness_b")),
                             {},
                             fp.get<int>()};
      const Json& cross = field(j, "cross_separations_sq");
      for (std::size_t k = 0; k < 8; ++k) c.cross_separations[k] = to_rational(field(cross, kCrossNames[k]), kCrossNames[k]);
      return c;
    }
    throw InvalidInput("unknown certificate kind \"" + kind + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad certificate: ") + e.what());
  }
}

std::string growth_report_json(const GrowthReport& r) {
  Json j;
  j["ball_sizes"] = r.ball_sizes;
  Json e = Json::array();
  for (const auto& x : r.entropy_estimates) e.push_back(interval(x));
  j["entropy_estimates"] = e;
  Json c = Json::array();
  for (const auto& x : r.cheeger_ratios) c.push_back(rational(x));
  j["cheeger_ratios"] = c;
  return dump(j);
}

std::string bound_chain_json(const BoundChain& b) {
  Json j;
  j["d_free"] = b.d_free;
  j["d_pi"] = b.d_pi;
  j["kappa_f2"] = interval(b.kappa_f2);
  j["kappa_lower"] = b.kappa_lower ? interval(*b.kappa_lower) : Json(nullptr);
  j["h_lower"] = b.h_lower ? interval(*b.h_lower) : Json(nullptr);
  j["entropy_lower"] = interval(b.entropy_lower);
  j["growth_epsilon"] = interval(b.growth_epsilon);
  return dump(j);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << content;
}

}  // namespace pingcert
