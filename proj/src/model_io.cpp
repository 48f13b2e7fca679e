#include "spam/model_io.hpp"

#include <filesystem>
#include <fstream>

namespace spam {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  const auto nrows = static_cast<Index>(j.size());
  require(nrows > 0, "schema", "model file: empty matrix");
  const auto ncols = static_cast<Index>(j.at(0).size());
  Matrix m(nrows, ncols);
  for (Index r = 0; r < nrows; ++r) {
    const auto& row = j.at(static_cast<size_t>(r));
    require(static_cast<Index>(row.size()) == ncols, "schema", "model file: ragged matrix");
    for (Index c = 0; c < ncols; ++c) m(r, c) = row.at(static_cast<size_t>(c)).get<double>();
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v[i] = j.at(static_cast<size_t>(i)).get<double>();
  return v;
}

json bank_to_json(const FeatureNetBank& bank) {
  json jb;
  jb["num_features"] = bank.num_features;
  jb["degree"] = bank.degree;
  jb["subnets"] = bank.subnets;
  jb["tied"] = bank.tied;
  jb["activation"] = bank.activation == Activation::Relu ? "relu" : "exu";
  json orders = json::array();
  for (const auto& nets : bank.orders) {
    json jnets = json::array();
    for (const auto& net : nets) {
      json layers = json::array();
      for (const auto& layer : net.layers)
        layers.push_back({{"w", matrix_to_json(layer.w)}, {"b", vector_to_json(layer.b)}});
      jnets.push_back({{"layers", std::move(layers)}});
    }
    orders.push_back(std::move(jnets));
  }
  jb["orders"] = std::move(orders);
  return jb;
}

FeatureNetBank bank_from_json(const json& jb) {
  FeatureNetBank bank;
  bank.num_features = jb.at("num_features").get<int>();
  bank.degree = jb.at("degree").get<int>();
  bank.subnets = jb.at("subnets").get<int>();
  bank.tied = jb.at("tied").get<bool>();
  const std::string act = jb.at("activation").get<std::string>();
  require(act == "relu" || act == "exu", "schema", "model file: unknown activation");
  bank.activation = act == "relu" ? Activation::Relu : Activation::ExU;
  for (const auto& jnets : jb.at("orders")) {
    std::vector<FeatureNet> nets;
    for (const auto& jnet : jnets) {
      FeatureNet net;
      for (const auto& jl : jnet.at("layers")) {
        NetLayer layer;
        layer.w = matrix_from_json(jl.at("w"));
        layer.b = vector_from_json(jl.at("b"));
        net.layers.push_back(std::move(layer));
      }
      nets.push_back(std::move(net));
    }
    bank.orders.push_back(std::move(nets));
  }
  return bank;
}

}  // namespace

json model_to_json(const SpamModel& model) {
  const SpamParams& p = model.poly;
  json j;
  j["format_version"] = kModelFormatVersion;
  j["d"] = p.num_features;
  j["C"] = p.num_classes;
  j["rank_spec"] = {{"degree", p.rank_spec.degree}, {"ranks", p.rank_spec.ranks}};
  j["bias"] = vector_to_json(p.bias);
  j["order1"] = matrix_to_json(p.order1);
  json bases = json::object(), singular = json::object();
  for (int l = 2; l <= p.degree(); ++l) {
    bases[std::to_string(l)] = matrix_to_json(p.basis(l));
    singular[std::to_string(l)] = matrix_to_json(p.lambdas(l));
  }
  j["bases"] = std::move(bases);
  j["singular"] = std::move(singular);
  j["mode_flags"] = {{"neural", model.neural()}, {"convex_mode", model.convex_mode}};
  if (model.neural()) j["feature_nets"] = bank_to_json(*model.nets);
  return j;
}

SpamModel model_from_json(const json& j) {
  try {
    const int version = j.at("format_version").get<int>();
    require(version == kModelFormatVersion, "schema",
            "unsupported model format version " + std::to_string(version));
    const int d = j.at("d").get<int>();
    const int c = j.at("C").get<int>();
    RankSpec spec;
    spec.degree = j.at("rank_spec").at("degree").get<int>();
    spec.ranks = j.at("rank_spec").at("ranks").get<std::vector<int>>();
    SpamModel model;
    model.poly = SpamParams::zeros(d, c, spec);
    model.poly.bias = vector_from_json(j.at("bias"));
    model.poly.order1 = matrix_from_json(j.at("order1"));
    for (int l = 2; l <= spec.degree; ++l) {
      model.poly.basis(l) = matrix_from_json(j.at("bases").at(std::to_string(l)));
      model.poly.lambdas(l) = matrix_from_json(j.at("singular").at(std::to_string(l)));
    }
    model.convex_mode = j.at("mode_flags").value("convex_mode", false);
    if (j.at("mode_flags").value("neural", false))
      model.nets = bank_from_json(j.at("feature_nets"));
    model.poly.validate();
    return model;
  } catch (const json::exception& e) {
    fail("schema", std::string("model file is malformed: ") + e.what());
  }
}

void atomic_write_file(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail("io", "cannot open '" + tmp + "' for writing");
    out << contents;
    if (!out) fail("io", "failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail("io", "cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

void save_model(const SpamModel& model, const std::string& path) {
  atomic_write_file(path, model_to_json(model).dump(2) + "\n");
}

SpamModel load_model(const std::string& path) {
  return model_from_json(load_json_file(path));
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("io", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail("parse", "'" + path + "' is not valid JSON: " + e.what());
  }
  return j;
}

}  // namespace spam
