#include "spam/feature_nets.hpp"

#include <cmath>

#include "spam/forward.hpp"

namespace spam {

namespace {

// Affine part of one layer on a batch: (B x in) -> (B x out).
Matrix affine(const NetLayer& layer, const Matrix& in) {
  return (in * layer.w.transpose()).rowwise() + layer.b.transpose();
}

Matrix layer_forward(const NetLayer& layer, Activation act, bool is_hidden, const Matrix& in,
                     Matrix* preact) {
  Matrix z;
  if (is_hidden && act == Activation::ExU) {
    require(layer.w.cols() == 1, "shape", "exponential units expect scalar input");
    z.resize(in.rows(), layer.w.rows());
    for (Index r = 0; r < in.rows(); ++r)
      for (Index c = 0; c < z.cols(); ++c)
        z(r, c) = std::exp(layer.w(c, 0)) * (in(r, 0) - layer.b[c]);
  } else {
    z = affine(layer, in);
  }
  if (preact) *preact = z;
  if (is_hidden) {
    if (act == Activation::Relu)
      z = z.cwiseMax(0.0);
    else
      z = z.cwiseMax(0.0).cwiseMin(1.0);
  }
  return z;
}

}  // namespace

Index FeatureNet::parameter_count() const {
  Index n = 0;
  for (const auto& l : layers) n += l.w.size() + l.b.size();
  return n;
}

const std::vector<FeatureNet>& FeatureNetBank::nets_for_order(int order) const {
  require(order >= 1 && order <= degree, "shape", "nets_for_order: order out of range");
  return tied ? orders[0] : orders[static_cast<size_t>(order - 1)];
}

std::vector<FeatureNet>& FeatureNetBank::nets_for_order(int order) {
  require(order >= 1 && order <= degree, "shape", "nets_for_order: order out of range");
  return tied ? orders[0] : orders[static_cast<size_t>(order - 1)];
}

Index FeatureNetBank::parameter_count() const {
  Index n = 0;
  for (const auto& order : orders)
    for (const auto& net : order) n += net.parameter_count();
  return n;
}

FeatureNetBank FeatureNetBank::zeros_like() const {
  FeatureNetBank z = *this;
  for (auto& order : z.orders)
    for (auto& net : order)
      for (auto& layer : net.layers) {
        layer.w.setZero();
        layer.b.setZero();
      }
  return z;
}

FeatureNetBank init_bank(const std::string& arch, int num_features, int degree, int subnets,
                         std::uint64_t seed, bool tied) {
  require(num_features >= 1 && degree >= 1 && subnets >= 1, "config",
          "init_bank: dimensions must be positive");
  std::vector<int> hidden;
  Activation act;
  if (arch == "deep") {
    hidden = {64, 64, 32};
    act = Activation::Relu;
  } else if (arch == "wide") {
    hidden = {1024};
    act = Activation::ExU;
  } else {
    fail("config", "init_bank: unknown arch '" + arch + "' (expected deep or wide)");
  }

  FeatureNetBank bank;
  bank.num_features = num_features;
  bank.degree = degree;
  bank.subnets = subnets;
  bank.tied = tied;
  bank.activation = act;

  Rng rng(seed);
  const int order_slots = tied ? 1 : degree;
  for (int o = 0; o < order_slots; ++o) {
    std::vector<FeatureNet> nets;
    nets.reserve(static_cast<size_t>(num_features));
    for (int f = 0; f < num_features; ++f) {
      FeatureNet net;
      int in = 1;
      for (size_t h = 0; h <= hidden.size(); ++h) {
        const int out = h < hidden.size() ? hidden[h] : subnets;
        NetLayer layer;
        layer.w.resize(out, in);
        layer.b.resize(out);
        const double lim = 1.0 / std::sqrt(static_cast<double>(in));
        for (Index c = 0; c < layer.w.cols(); ++c)
          for (Index r = 0; r < layer.w.rows(); ++r) layer.w(r, c) = rng.uniform(-lim, lim);
        for (Index r = 0; r < layer.b.size(); ++r) layer.b[r] = rng.uniform(-lim, lim);
        net.layers.push_back(std::move(layer));
        in = out;
      }
      nets.push_back(std::move(net));
    }
    bank.orders.push_back(std::move(nets));
  }
  return bank;
}

FeatureNetBank identity_bank(int num_features, int degree, int subnets, bool tied) {
  FeatureNetBank bank;
  bank.num_features = num_features;
  bank.degree = degree;
  bank.subnets = subnets;
  bank.tied = tied;
  bank.activation = Activation::Relu;
  const int order_slots = tied ? 1 : degree;
  for (int o = 0; o < order_slots; ++o) {
    std::vector<FeatureNet> nets;
    for (int f = 0; f < num_features; ++f) {
      FeatureNet net;
      NetLayer layer;
      layer.w = Matrix::Ones(subnets, 1);
      layer.b = Vector::Zero(subnets);
      net.layers.push_back(std::move(layer));
      nets.push_back(std::move(net));
    }
    bank.orders.push_back(std::move(nets));
  }
  return bank;
}

Vector feature_map_forward(const FeatureNetBank& bank, int order, const Vector& x) {
  require(x.size() == bank.num_features, "shape", "feature_map_forward: input size mismatch");
  const auto& nets = bank.nets_for_order(order);
  Vector out(bank.expanded_dim());
  Matrix in(1, 1);
  for (int f = 0; f < bank.num_features; ++f) {
    in(0, 0) = x[f];
    Matrix a = in;
    const auto& layers = nets[static_cast<size_t>(f)].layers;
    for (size_t li = 0; li < layers.size(); ++li)
      a = layer_forward(layers[li], bank.activation, li + 1 < layers.size(), a, nullptr);
    out.segment(static_cast<Index>(f) * bank.subnets, bank.subnets) = a.row(0).transpose();
  }
  return out;
}

Matrix feature_map_forward_batch(const FeatureNetBank& bank, int order, const Matrix& x,
                                 std::vector<NetCache>* caches) {
  require(x.cols() == bank.num_features, "shape", "feature_map_forward_batch: width mismatch");
  const auto& nets = bank.nets_for_order(order);
  const Index b = x.rows();
  Matrix out(b, bank.expanded_dim());
  if (caches) caches->assign(static_cast<size_t>(bank.num_features), NetCache{});
  for (int f = 0; f < bank.num_features; ++f) {
    Matrix a = x.col(f);
    const auto& layers = nets[static_cast<size_t>(f)].layers;
    NetCache* cache = caches ? &(*caches)[static_cast<size_t>(f)] : nullptr;
    for (size_t li = 0; li < layers.size(); ++li) {
      if (cache) cache->inputs.push_back(a);
      Matrix pre;
      a = layer_forward(layers[li], bank.activation, li + 1 < layers.size(), a,
                        cache ? &pre : nullptr);
      if (cache) cache->preacts.push_back(std::move(pre));
    }
    out.middleCols(static_cast<Index>(f) * bank.subnets, bank.subnets) = a;
  }
  return out;
}

void feature_map_backward_batch(const FeatureNetBank& bank, int order,
                                const std::vector<NetCache>& caches, const Matrix& dout,
                                FeatureNetBank& grads) {
  const auto& nets = bank.nets_for_order(order);
  auto& gnets = grads.nets_for_order(order);
  for (int f = 0; f < bank.num_features; ++f) {
    const auto& layers = nets[static_cast<size_t>(f)].layers;
    auto& glayers = gnets[static_cast<size_t>(f)].layers;
    const NetCache& cache = caches[static_cast<size_t>(f)];
    Matrix delta = dout.middleCols(static_cast<Index>(f) * bank.subnets, bank.subnets);
    for (int li = static_cast<int>(layers.size()) - 1; li >= 0; --li) {
      const NetLayer& layer = layers[static_cast<size_t>(li)];
      NetLayer& glayer = glayers[static_cast<size_t>(li)];
      const Matrix& input = cache.inputs[static_cast<size_t>(li)];
      const bool hidden = static_cast<size_t>(li) + 1 < layers.size();
      if (hidden) {
        const Matrix& pre = cache.preacts[static_cast<size_t>(li)];
        if (bank.activation == Activation::Relu) {
          delta = delta.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
        } else {
          delta = delta.cwiseProduct(
              ((pre.array() > 0.0) && (pre.array() < 1.0)).cast<double>().matrix());
        }
      }
      if (hidden && bank.activation == Activation::ExU) {
        // z_j = exp(w_j) (x - b_j):  dz/dw_j = z_j, dz/db_j = -exp(w_j),
        // dz/dx = exp(w_j)
        const Matrix& pre = cache.preacts[static_cast<size_t>(li)];
        Matrix next_delta = Matrix::Zero(input.rows(), 1);
        for (Index c = 0; c < delta.cols(); ++c) {
          const double ew = std::exp(layer.w(c, 0));
          glayer.w(c, 0) += delta.col(c).dot(pre.col(c));
          glayer.b[c] += -ew * delta.col(c).sum();
          next_delta.col(0) += ew * delta.col(c);
        }
        delta = next_delta;
      } else {
        glayer.w += delta.transpose() * input;
        glayer.b += delta.colwise().sum().transpose();
        if (li > 0) delta = delta * layer.w;
      }
    }
  }
}

Vector neural_forward_multiclass(const SpamParams& params, const FeatureNetBank& bank,
                                 const Vector& x) {
  require(params.num_features == bank.expanded_dim(), "shape",
          "neural forward: polynomial expects " + std::to_string(params.num_features) +
              " inputs, bank provides " + std::to_string(bank.expanded_dim()));
  require(params.degree() <= bank.degree, "shape", "neural forward: bank degree too small");
  Vector logits = params.bias + params.order1 * feature_map_forward(bank, 1, x);
  for (int l = 2; l <= params.degree(); ++l) {
    const Vector fl = feature_map_forward(bank, l, x);
    const Vector s = params.basis(l) * fl;
    Vector powered(s.size());
    for (Index i = 0; i < s.size(); ++i) powered[i] = ipow(s[i], l);
    logits += params.lambdas(l) * powered;
  }
  return logits;
}

double neural_forward(const SpamParams& params, const FeatureNetBank& bank, const Vector& x) {
  require(params.num_classes == 1, "shape", "neural_forward requires a single-logit model");
  return neural_forward_multiclass(params, bank, x)[0];
}

Matrix neural_logits_rows(const SpamParams& params, const FeatureNetBank& bank, const Matrix& x) {
  Matrix logits(x.rows(), params.num_classes);
  for (Index i = 0; i < x.rows(); ++i)
    logits.row(i) = neural_forward_multiclass(params, bank, x.row(i).transpose()).transpose();
  return logits;
}

std::vector<BlockRef> param_blocks(FeatureNetBank& bank) {
  std::vector<BlockRef> blocks;
  for (size_t o = 0; o < bank.orders.size(); ++o)
    for (size_t f = 0; f < bank.orders[o].size(); ++f) {
      auto& net = bank.orders[o][f];
      for (size_t li = 0; li < net.layers.size(); ++li) {
        const std::string prefix =
            "net/" + std::to_string(o + 1) + "/" + std::to_string(f) + "/" + std::to_string(li);
        blocks.push_back({prefix + "/w", net.layers[li].w.data(), net.layers[li].w.size()});
        blocks.push_back({prefix + "/b", net.layers[li].b.data(), net.layers[li].b.size()});
      }
    }
  return blocks;
}

}  // namespace spam
