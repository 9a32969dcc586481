#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "junction/rng.hpp"

namespace junction {

// Fully connected Q-network: ReLU hidden layers and a linear head, optionally
// split into dueling value/advantage streams aggregated as
// Q(s,a) = V(s) + A(s,a) - mean_a A(s,a).
//
// Templated on the scalar so the same code runs in float for training and in
// double for finite-difference verification.
template <typename T>
class Mlp {
 public:
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

  struct Layer {
    Matrix w;
    Matrix b;  // column vector
  };

  int input_size = 0;
  int action_count = 0;
  bool dueling = false;
  std::vector<Layer> hidden;
  Layer head;               // used when !dueling
  Layer value, advantage;   // used when dueling

  Mlp() = default;

  Mlp(int input, const std::vector<int>& hidden_sizes, int actions, bool use_dueling, Rng& rng)
      : input_size(input), action_count(actions), dueling(use_dueling) {
    int fan_in = input;
    for (int h : hidden_sizes) {
      hidden.push_back(init_layer(h, fan_in, rng));
      fan_in = h;
    }
    if (dueling) {
      value = init_layer(1, fan_in, rng);
      advantage = init_layer(actions, fan_in, rng);
    } else {
      head = init_layer(actions, fan_in, rng);
    }
  }

  std::vector<int> hidden_sizes() const {
    std::vector<int> s;
    for (const auto& l : hidden) s.push_back(static_cast<int>(l.w.rows()));
    return s;
  }

  struct Activations {
    std::vector<Matrix> inputs;  // inputs[l] = input of hidden layer l; back() = last hidden output
    std::vector<Matrix> z;       // pre-activations per hidden layer
  };

  // x: (input x batch) -> Q: (actions x batch).
  Matrix forward(const Matrix& x, Activations* cache = nullptr) const {
    if (x.rows() != input_size) throw std::invalid_argument("Mlp::forward: input shape mismatch");
    Matrix h = x;
    if (cache) {
      cache->inputs.clear();
      cache->z.clear();
    }
    for (const auto& layer : hidden) {
      if (cache) cache->inputs.push_back(h);
      Matrix z = (layer.w * h).colwise() + layer.b.col(0);
      if (cache) cache->z.push_back(z);
      h = z.cwiseMax(T(0));
    }
    if (cache) cache->inputs.push_back(h);
    if (!dueling) {
      return (head.w * h).colwise() + head.b.col(0);
    }
    Matrix val = (value.w * h).colwise() + value.b.col(0);          // 1 x B
    Matrix adv = (advantage.w * h).colwise() + advantage.b.col(0);  // A x B
    Matrix q = adv;
    const Matrix mean = adv.colwise().mean();
    q.rowwise() -= mean.row(0);
    q.rowwise() += val.row(0);
    return q;
  }

  std::vector<T> forward_one(const std::vector<float>& obs) const {
    if (static_cast<int>(obs.size()) != input_size)
      throw std::invalid_argument("Mlp::forward_one: input shape mismatch");
    Matrix x(input_size, 1);
    for (int i = 0; i < input_size; ++i) x(i, 0) = static_cast<T>(obs[i]);
    const Matrix q = forward(x);
    std::vector<T> out(action_count);
    for (int a = 0; a < action_count; ++a) out[a] = q(a, 0);
    return out;
  }

  struct Gradients {
    std::vector<Layer> hidden;
    Layer head, value, advantage;
  };

  // Backpropagates an upstream gradient dL/dQ (actions x batch); requires the
  // Activations cache from the matching forward call.
  Gradients backward(const Activations& act, const Matrix& dq) const {
    Gradients g;
    const Matrix& last = act.inputs.back();
    Matrix dh;
    if (!dueling) {
      g.head.w = dq * last.transpose();
      g.head.b = dq.rowwise().sum();
      dh = head.w.transpose() * dq;
    } else {
      const Matrix dval = dq.colwise().sum();  // 1 x B
      Matrix dadv = dq;
      const Matrix colmean = dq.colwise().mean();
      dadv.rowwise() -= colmean.row(0);
      g.value.w = dval * last.transpose();
      g.value.b = dval.rowwise().sum();
      g.advantage.w = dadv * last.transpose();
      g.advantage.b = dadv.rowwise().sum();
      dh = value.w.transpose() * dval + advantage.w.transpose() * dadv;
    }
    g.hidden.resize(hidden.size());
    for (int l = static_cast<int>(hidden.size()) - 1; l >= 0; --l) {
      const Matrix dz = dh.cwiseProduct((act.z[l].array() > T(0)).template cast<T>().matrix());
      g.hidden[l].w = dz * act.inputs[l].transpose();
      g.hidden[l].b = dz.rowwise().sum();
      if (l > 0) dh = hidden[l].w.transpose() * dz;
    }
    return g;
  }

  // Layers of a parameter set in pinned order: hidden layers front-to-back,
  // then head (plain) or value,advantage (dueling). Checkpoints and the
  // optimizer iterate in this order.
  std::vector<Layer*> layers() {
    std::vector<Layer*> out;
    for (auto& l : hidden) out.push_back(&l);
    if (dueling) {
      out.push_back(&value);
      out.push_back(&advantage);
    } else {
      out.push_back(&head);
    }
    return out;
  }
  std::vector<const Layer*> layers() const {
    std::vector<const Layer*> out;
    for (const auto& l : hidden) out.push_back(&l);
    if (dueling) {
      out.push_back(&value);
      out.push_back(&advantage);
    } else {
      out.push_back(&head);
    }
    return out;
  }

  static std::vector<Layer*> gradient_layers(Gradients& g, bool dueling_net, size_t n_hidden) {
    std::vector<Layer*> out;
    g.hidden.resize(n_hidden);
    for (auto& l : g.hidden) out.push_back(&l);
    if (dueling_net) {
      out.push_back(&g.value);
      out.push_back(&g.advantage);
    } else {
      out.push_back(&g.head);
    }
    return out;
  }

 private:
  Layer init_layer(int out, int in, Rng& rng) {
    Layer l;
    l.w.resize(out, in);
    l.b = Matrix::Zero(out, 1);
    const double limit = std::sqrt(6.0 / in);
    for (int r = 0; r < out; ++r)
      for (int c = 0; c < in; ++c) l.w(r, c) = static_cast<T>(rng.uniform(-limit, limit));
    return l;
  }
};

// Optimizer accumulators, shaped like the parameters.
template <typename T>
struct RmspropState {
  typename Mlp<T>::Gradients cache;
};

// cache <- rho*cache + (1-rho)*g^2 ; theta <- theta - lr*g/(sqrt(cache)+eps)
template <typename T>
void rmsprop_step(Mlp<T>& net, typename Mlp<T>::Gradients& grads, RmspropState<T>& state,
                  T lr, T rho, T eps) {
  auto params = net.layers();
  auto gs = Mlp<T>::gradient_layers(grads, net.dueling, net.hidden.size());
  auto cs = Mlp<T>::gradient_layers(state.cache, net.dueling, net.hidden.size());
  for (size_t i = 0; i < params.size(); ++i) {
    auto& p = *params[i];
    auto& g = *gs[i];
    auto& c = *cs[i];
    if (c.w.rows() != g.w.rows() || c.w.cols() != g.w.cols()) {
      c.w = Mlp<T>::Matrix::Zero(g.w.rows(), g.w.cols());
      c.b = Mlp<T>::Matrix::Zero(g.b.rows(), g.b.cols());
    }
    c.w.array() = rho * c.w.array() + (T(1) - rho) * g.w.array().square();
    c.b.array() = rho * c.b.array() + (T(1) - rho) * g.b.array().square();
    p.w.array() -= lr * g.w.array() / (c.w.array().sqrt() + eps);
    p.b.array() -= lr * g.b.array() / (c.b.array().sqrt() + eps);
  }
}

}  // namespace junction
