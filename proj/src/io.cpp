#include "cdfsvm/io.hpp"

#include "json.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cdfsvm {

namespace {

using nlohmann::json;

json vec(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector to_vector(const json& a) {
  if (!a.is_array()) throw ParseError("expected an array of numbers", 1);
  Vector v(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw ParseError("expected a number", 1);
    v[static_cast<Index>(i)] = a[i].get<double>();
  }
  return v;
}

void fill_common(json& j, const ScoreModel& m) {
  j["method"] = to_string(m.method);
  j["kernel"] = {{"kind", m.kernel.kind == KernelSpec::Kind::rbf ? "rbf" : "linear"},
                 {"delta", m.kernel.delta}};
  j["gamma"] = m.gamma;
  j["coefficients"] = vec(m.coefficients);
  j["offset"] = m.offset;
  json rows = json::array();
  for (Index i = 0; i < m.support.rows(); ++i) {
    json r = json::array();
    for (Index k = 0; k < m.support.cols(); ++k) r.push_back(m.support(i, k));
    rows.push_back(std::move(r));
  }
  j["support"] = std::move(rows);
}

void read_common(const json& j, ScoreModel& m) {
  m.method = parse_method(j.at("method").get<std::string>());
  const auto& k = j.at("kernel");
  const std::string kind = k.at("kind").get<std::string>();
  if (kind == "rbf") {
    m.kernel = KernelSpec::rbf(k.at("delta").get<double>());
  } else if (kind == "linear") {
    m.kernel = KernelSpec::linear();
  } else {
    throw ParseError("unknown kernel kind '" + kind + "'", 1);
  }
  m.gamma = j.at("gamma").get<double>();
  m.coefficients = to_vector(j.at("coefficients"));
  m.offset = j.at("offset").get<double>();
  const auto& rows = j.at("support");
  if (!rows.is_array() || rows.empty()) throw ParseError("support must be a non-empty array", 1);
  const std::size_t d = rows[0].size();
  m.support.resize(static_cast<Index>(rows.size()), static_cast<Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw ParseError("support rows have different lengths", 1);
    for (std::size_t c = 0; c < d; ++c) {
      m.support(static_cast<Index>(i), static_cast<Index>(c)) = rows[i][c].get<double>();
    }
  }
  if (m.coefficients.size() != m.support.rows()) {
    throw ParseError("coefficient count does not match the support rows", 1);
  }
  m.kernel.validate();
}

}  // namespace

std::string model_to_json(const Model& model, const Scaler& scaler) {
  json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  std::visit(
      [&](const auto& m) {
        fill_common(j, m);
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DualModel>) {
          j["kind"] = "dual";
          j["epsilon"] = m.epsilon;
          j["caps"] = vec(m.caps);
          j["converged"] = m.converged;
          j["iterations"] = m.iterations;
          j["objective"] = m.objective;
          j["violation"] = m.violation;
          j["weights"] = m.weights;
        } else {
          j["kind"] = "closed_form";
          j["residual"] = m.residual;
          j["weights"] = m.weights;
        }
      },
      model);
  j["scaler"] = {{"min", vec(scaler.lo())}, {"max", vec(scaler.hi())}};
  return j.dump(2) + "\n";
}

StoredModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid model JSON: ") + e.what(), 1);
  }
  try {
    if (j.value("format", "") != kModelFormat) throw ParseError("not a cdfsvm model document", 1);
    const int version = j.at("version").get<int>();
    if (version != kModelVersion) {
      throw ParseError("unsupported model version " + std::to_string(version), 1);
    }
    StoredModel out;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "dual") {
      DualModel m;
      read_common(j, m);
      m.epsilon = j.at("epsilon").get<double>();
      m.caps = to_vector(j.at("caps"));
      m.converged = j.at("converged").get<bool>();
      m.iterations = j.at("iterations").get<long>();
      m.objective = j.at("objective").get<double>();
      m.violation = j.value("violation", 0.0);
      m.weights = j.value("weights", "");
      out.model = std::move(m);
    } else if (kind == "closed_form") {
      ClosedFormModel m;
      read_common(j, m);
      m.residual = j.value("residual", 0.0);
      m.weights = j.value("weights", "");
      out.model = std::move(m);
    } else {
      throw ParseError("unknown model kind '" + kind + "'", 1);
    }
    const auto& s = j.at("scaler");
    out.scaler = Scaler(to_vector(s.at("min")), to_vector(s.at("max")));
    if (out.scaler.dim() != base(out.model).support.cols()) {
      throw ParseError("scaler dimension does not match the model", 1);
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model document: ") + e.what(), 1);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("malformed model document: ") + e.what(), 1);
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move output into '" + path + "': " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string provenance_header(const Provenance& entries) {
  std::string out;
  for (const auto& [k, v] : entries) out += "# " + k + ": " + v + "\n";
  return out;
}

std::string weights_csv(const Vector& v) {
  std::string out = "index,v\n";
  for (Index i = 0; i < v.size(); ++i) out += std::to_string(i) + "," + format_double(v[i]) + "\n";
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace cdfsvm
