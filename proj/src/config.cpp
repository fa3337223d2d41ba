// JSON config loading. Everything wrong with a config surfaces as ConfigError,
// including parse failures from the json library and dimension mismatches
// between the tables and the declared cone.

#include "soalm/config.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace soalm {

namespace {

using nlohmann::json;

Vector parse_vector(const json& j, const std::string& what, int expect = -1) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
  Vector v;
  v.reserve(j.size());
  for (const auto& el : j) {
    if (!el.is_number()) throw ConfigError(what + " must be an array of numbers");
    v.push_back(el.get<double>());
  }
  if (expect >= 0 && int(v.size()) != expect)
    throw ConfigError(what + " must have length " + std::to_string(expect));
  return v;
}

Matrix parse_matrix(const json& j, const std::string& what, int rows, int cols) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of rows");
  if (rows >= 0 && int(j.size()) != rows)
    throw ConfigError(what + " must have " + std::to_string(rows) + " rows");
  Matrix M(int(j.size()), cols);
  for (int i = 0; i < int(j.size()); ++i) {
    Vector row = parse_vector(j[i], what + " row " + std::to_string(i), cols);
    for (int k = 0; k < cols; ++k) M(i, k) = row[k];
  }
  return M;
}

Cone parse_cone(const json& j) {
  if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array())
    throw ConfigError("cone must be an object with a blocks array");
  std::vector<ConeBlock> blocks;
  for (const auto& item : j["blocks"]) {
    if (!item.is_object() || item.size() != 1)
      throw ConfigError("each cone block must be a single {family: size} pair");
    for (const auto& [key, val] : item.items()) {
      if (!val.is_number_integer() || val.get<int>() <= 0)
        throw ConfigError("cone block size must be a positive integer");
      int sz = val.get<int>();
      if (key == "orthant")
        blocks.push_back(Cone::orthant(sz));
      else if (key == "soc")
        blocks.push_back(Cone::soc(sz));
      else if (key == "psd")
        blocks.push_back(Cone::psd(sz));
      else
        throw ConfigError("unknown cone family '" + key + "'");
    }
  }
  return Cone(std::move(blocks));
}

}  // namespace

LoadedProblem load_problem_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid json: ") + e.what());
  }
  try {
    if (!j.is_object()) throw ConfigError("config must be a json object");

    if (j.contains("builtin")) {
      if (!j["builtin"].is_string()) throw ConfigError("builtin must be a string");
      Program prog = [&] {
        try {
          return builtin(j["builtin"].get<std::string>());
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      }();
      LoadedProblem lp{std::move(prog), {}};
      lp.x0 = j.contains("x0") ? parse_vector(j["x0"], "x0", lp.program.n)
                               : Vector(size_t(lp.program.n), 0.0);
      return lp;
    }

    if (!j.contains("name") || !j.contains("n") || !j.contains("objective"))
      throw ConfigError("config needs a builtin name or name/n/objective tables");
    if (!j["name"].is_string()) throw ConfigError("name must be a string");
    if (!j["n"].is_number_integer() || j["n"].get<int>() <= 0)
      throw ConfigError("n must be a positive integer");
    const int n = j["n"].get<int>();

    Cone K = j.contains("cone") ? parse_cone(j["cone"]) : Cone(std::vector<ConeBlock>{});

    const json& obj = j["objective"];
    if (!obj.is_object() || !obj.contains("Q") || !obj.contains("q"))
      throw ConfigError("objective needs Q and q tables");
    QuadraticData data;
    data.Q = SymMatrix::symmetrized(parse_matrix(obj["Q"], "objective.Q", n, n));
    data.q = parse_vector(obj["q"], "objective.q", n);
    if (obj.contains("r")) {
      if (!obj["r"].is_number()) throw ConfigError("objective.r must be a number");
      data.r = obj["r"].get<double>();
    }

    if (j.contains("equality")) {
      const json& eq = j["equality"];
      if (!eq.is_object() || !eq.contains("A") || !eq.contains("b"))
        throw ConfigError("equality needs A and b tables");
      data.A = parse_matrix(eq["A"], "equality.A", -1, n);
      data.b = parse_vector(eq["b"], "equality.b", data.A.rows());
    } else {
      data.A = Matrix(0, n);
    }

    if (j.contains("conic")) {
      const json& co = j["conic"];
      if (!co.is_object() || !co.contains("G") || !co.contains("d"))
        throw ConfigError("conic needs G and d tables");
      data.G = parse_matrix(co["G"], "conic.G", K.dim(), n);
      data.d = parse_vector(co["d"], "conic.d", K.dim());
    } else if (K.dim() > 0) {
      throw ConfigError("a nonempty cone needs a conic section");
    } else {
      data.G = Matrix(0, n);
    }

    std::optional<Reference> ref;
    if (j.contains("reference")) {
      const json& r = j["reference"];
      if (!r.is_object() || !r.contains("x"))
        throw ConfigError("reference needs at least x");
      Reference rr;
      rr.x = parse_vector(r["x"], "reference.x", n);
      rr.lambda = r.contains("lambda")
                      ? parse_vector(r["lambda"], "reference.lambda", data.A.rows())
                      : Vector(size_t(data.A.rows()), 0.0);
      rr.mu = r.contains("mu") ? parse_vector(r["mu"], "reference.mu", K.dim())
                               : Vector(size_t(K.dim()), 0.0);
      ref = std::move(rr);
    }

    Vector x0 =
        j.contains("x0") ? parse_vector(j["x0"], "x0", n) : Vector(size_t(n), 0.0);

    return LoadedProblem{make_quadratic_program(j["name"].get<std::string>(),
                                                std::move(data), std::move(K),
                                                std::move(ref)),
                         std::move(x0)};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

LoadedProblem load_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_problem_json(buf.str());
}

std::string cone_to_json(const Cone& K) {
  json blocks = json::array();
  for (const auto& b : K.blocks()) {
    const char* key = b.kind == BlockKind::Orthant ? "orthant"
                      : b.kind == BlockKind::Soc   ? "soc"
                                                   : "psd";
    blocks.push_back(json{{key, b.p}});
  }
  return json{{"blocks", blocks}}.dump();
}

Cone cone_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cone json: ") + e.what());
  }
  return parse_cone(j);
}

}  // namespace soalm
