/*
 * Copyright 2026 The cranhl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cranhl/nn/ops.hpp"

#include <algorithm>
#include <cmath>

namespace cranhl::nn {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidShapeError(msg);
}

bool want_grad(Tape* tape, std::initializer_list<const Tensor*> inputs) {
  if (!tape) return false;
  for (const Tensor* t : inputs) {
    if (t->defined() && t->needs_grad()) return true;
  }
  return false;
}

}  // namespace

Tensor conv1d(Tape* tape, const Tensor& input, const Tensor& filters,
              const Tensor& bias) {
  require(input.rank() == 2, "conv1d: input must be [C_in x T]");
  require(filters.rank() == 3, "conv1d: filters must be [C_out x C_in x K]");
  const std::size_t c_in = input.dim(0), t_len = input.dim(1);
  const std::size_t c_out = filters.dim(0), k_len = filters.dim(2);
  require(filters.dim(1) == c_in,
          "conv1d: filter channels " + std::to_string(filters.dim(1)) +
              " != input channels " + std::to_string(c_in));
  require(k_len % 2 == 1, "conv1d: kernel size must be odd");
  require(bias.defined() && bias.rank() == 1 && bias.dim(0) == c_out,
          "conv1d: bias must be [C_out]");
  const auto half = static_cast<std::ptrdiff_t>(k_len / 2);
  const auto t_n = static_cast<std::ptrdiff_t>(t_len);

  Tensor out({c_out, t_len});
  for (std::size_t c = 0; c < c_out; ++c) {
    double* orow = out.data() + c * t_len;
    std::fill(orow, orow + t_len, bias[c]);
    for (std::size_t i = 0; i < c_in; ++i) {
      const double* irow = input.data() + i * t_len;
      for (std::size_t k = 0; k < k_len; ++k) {
        const double w = filters[(c * c_in + i) * k_len + k];
        const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(k) - half;
        const std::ptrdiff_t t0 = std::max<std::ptrdiff_t>(0, -shift);
        const std::ptrdiff_t t1 = std::min(t_n, t_n - shift);
        for (std::ptrdiff_t t = t0; t < t1; ++t) orow[t] += w * irow[t + shift];
      }
    }
  }
  out.check_finite("conv1d");
  out.set_needs_grad(input.needs_grad() || filters.needs_grad() ||
                     bias.needs_grad());

  if (want_grad(tape, {&input, &filters, &bias})) {
    tape->push([input = input, filters = filters, bias = bias, out, c_in, c_out, t_len, k_len, half,
                t_n]() mutable {
      const std::vector<double>& gout = out.grad();
      if (bias.needs_grad()) {
        std::vector<double>& gb = bias.grad();
        for (std::size_t c = 0; c < c_out; ++c) {
          const double* g = gout.data() + c * t_len;
          double acc = 0.0;
          for (std::size_t t = 0; t < t_len; ++t) acc += g[t];
          gb[c] += acc;
        }
      }
      if (filters.needs_grad()) {
        std::vector<double>& gf = filters.grad();
        for (std::size_t c = 0; c < c_out; ++c) {
          const double* g = gout.data() + c * t_len;
          for (std::size_t i = 0; i < c_in; ++i) {
            const double* irow = input.data() + i * t_len;
            for (std::size_t k = 0; k < k_len; ++k) {
              const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(k) - half;
              const std::ptrdiff_t t0 = std::max<std::ptrdiff_t>(0, -shift);
              const std::ptrdiff_t t1 = std::min(t_n, t_n - shift);
              double acc = 0.0;
              for (std::ptrdiff_t t = t0; t < t1; ++t) {
                acc += g[t] * irow[t + shift];
              }
              gf[(c * c_in + i) * k_len + k] += acc;
            }
          }
        }
      }
      if (input.needs_grad()) {
        std::vector<double>& gi = input.grad();
        for (std::size_t c = 0; c < c_out; ++c) {
          const double* g = gout.data() + c * t_len;
          for (std::size_t i = 0; i < c_in; ++i) {
            double* girow = gi.data() + i * t_len;
            for (std::size_t k = 0; k < k_len; ++k) {
              const double w = filters[(c * c_in + i) * k_len + k];
              const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(k) - half;
              const std::ptrdiff_t t0 = std::max<std::ptrdiff_t>(0, -shift);
              const std::ptrdiff_t t1 = std::min(t_n, t_n - shift);
              for (std::ptrdiff_t t = t0; t < t1; ++t) {
                girow[t + shift] += w * g[t];
              }
            }
          }
        }
      }
    });
  }
  return out;
}

Tensor maxpool1d(Tape* tape, const Tensor& input, std::size_t pool) {
  require(input.rank() == 2, "maxpool1d: input must be [C x T]");
  require(pool >= 1, "maxpool1d: pool must be >= 1");
  const std::size_t c_n = input.dim(0), t_len = input.dim(1);
  require(t_len % pool == 0,
          "maxpool1d: time length " + std::to_string(t_len) +
              " not divisible by pool " + std::to_string(pool));
  const std::size_t t_out = t_len / pool;

  Tensor out({c_n, t_out});
  auto argmax = std::make_shared<std::vector<std::size_t>>(c_n * t_out);
  for (std::size_t c = 0; c < c_n; ++c) {
    const double* irow = input.data() + c * t_len;
    for (std::size_t t = 0; t < t_out; ++t) {
      std::size_t best = t * pool;
      double best_v = irow[best];
      for (std::size_t j = 1; j < pool; ++j) {
        const std::size_t idx = t * pool + j;
        if (irow[idx] > best_v) {  // strict: first maximal element wins ties
          best_v = irow[idx];
          best = idx;
        }
      }
      out.at(c, t) = best_v;
      (*argmax)[c * t_out + t] = best;
    }
  }
  out.set_needs_grad(input.needs_grad());

  if (want_grad(tape, {&input})) {
    tape->push([input = input, out, argmax, c_n, t_out, t_len]() mutable {
      const std::vector<double>& gout = out.grad();
      std::vector<double>& gi = input.grad();
      for (std::size_t c = 0; c < c_n; ++c) {
        for (std::size_t t = 0; t < t_out; ++t) {
          gi[c * t_len + (*argmax)[c * t_out + t]] += gout[c * t_out + t];
        }
      }
    });
  }
  return out;
}

Tensor dense(Tape* tape, const Tensor& input, const Tensor& weight,
             const Tensor& bias) {
  require(input.rank() == 1, "dense: input must be a vector");
  require(weight.rank() == 2, "dense: weight must be [M x D]");
  const std::size_t d = input.dim(0), m = weight.dim(0);
  require(weight.dim(1) == d, "dense: weight cols " +
                                  std::to_string(weight.dim(1)) +
                                  " != input size " + std::to_string(d));
  if (bias.defined()) {
    require(bias.rank() == 1 && bias.dim(0) == m, "dense: bias must be [M]");
  }

  Tensor out({m});
  for (std::size_t r = 0; r < m; ++r) {
    const double* wrow = weight.data() + r * d;
    double acc = bias.defined() ? bias[r] : 0.0;
    for (std::size_t c = 0; c < d; ++c) acc += wrow[c] * input[c];
    out[r] = acc;
  }
  out.check_finite("dense");
  out.set_needs_grad(input.needs_grad() || weight.needs_grad() ||
                     (bias.defined() && bias.needs_grad()));

  if (want_grad(tape, {&input, &weight, &bias})) {
    tape->push([input = input, weight = weight, bias = bias, out, d, m]() mutable {
      const std::vector<double>& g = out.grad();
      if (bias.defined() && bias.needs_grad()) {
        std::vector<double>& gb = bias.grad();
        for (std::size_t r = 0; r < m; ++r) gb[r] += g[r];
      }
      if (weight.needs_grad()) {
        std::vector<double>& gw = weight.grad();
        for (std::size_t r = 0; r < m; ++r) {
          double* gwrow = gw.data() + r * d;
          for (std::size_t c = 0; c < d; ++c) gwrow[c] += g[r] * input[c];
        }
      }
      if (input.needs_grad()) {
        std::vector<double>& gi = input.grad();
        for (std::size_t r = 0; r < m; ++r) {
          const double* wrow = weight.data() + r * d;
          for (std::size_t c = 0; c < d; ++c) gi[c] += g[r] * wrow[c];
        }
      }
    });
  }
  return out;
}

Tensor seq_linear(Tape* tape, const Tensor& input, const Tensor& weight) {
  require(input.rank() == 2, "seq_linear: input must be [T x D]");
  require(weight.rank() == 2, "seq_linear: weight must be [M x D]");
  const std::size_t t_n = input.dim(0), d = input.dim(1), m = weight.dim(0);
  require(weight.dim(1) == d, "seq_linear: weight cols != input dim");

  Tensor out({t_n, m});
  for (std::size_t t = 0; t < t_n; ++t) {
    const double* x = input.data() + t * d;
    for (std::size_t r = 0; r < m; ++r) {
      const double* wrow = weight.data() + r * d;
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) acc += wrow[c] * x[c];
      out.at(t, r) = acc;
    }
  }
  out.check_finite("seq_linear");
  out.set_needs_grad(input.needs_grad() || weight.needs_grad());

  if (want_grad(tape, {&input, &weight})) {
    tape->push([input = input, weight = weight, out, t_n, d, m]() mutable {
      const std::vector<double>& g = out.grad();
      if (weight.needs_grad()) {
        std::vector<double>& gw = weight.grad();
        for (std::size_t t = 0; t < t_n; ++t) {
          const double* x = input.data() + t * d;
          for (std::size_t r = 0; r < m; ++r) {
            const double gv = g[t * m + r];
            double* gwrow = gw.data() + r * d;
            for (std::size_t c = 0; c < d; ++c) gwrow[c] += gv * x[c];
          }
        }
      }
      if (input.needs_grad()) {
        std::vector<double>& gi = input.grad();
        for (std::size_t t = 0; t < t_n; ++t) {
          double* gx = gi.data() + t * d;
          for (std::size_t r = 0; r < m; ++r) {
            const double gv = g[t * m + r];
            const double* wrow = weight.data() + r * d;
            for (std::size_t c = 0; c < d; ++c) gx[c] += gv * wrow[c];
          }
        }
      }
    });
  }
  return out;
}

Tensor pointwise(Tape* tape, Pointwise op, const Tensor& input) {
  const std::size_t n = input.size();
  Tensor out(input.shape());
  for (std::size_t i = 0; i < n; ++i) {
    const double x = input[i];
    switch (op) {
      case Pointwise::kElu:
        out[i] = x > 0.0 ? x : std::expm1(x);
        break;
      case Pointwise::kTanh:
        out[i] = std::tanh(x);
        break;
      case Pointwise::kSigmoid:
        if (x >= 0.0) {
          out[i] = 1.0 / (1.0 + std::exp(-x));
        } else {
          const double e = std::exp(x);
          out[i] = e / (1.0 + e);
        }
        break;
    }
  }
  out.check_finite("pointwise");
  out.set_needs_grad(input.needs_grad());

  if (want_grad(tape, {&input})) {
    tape->push([input = input, out, op, n]() mutable {
      const std::vector<double>& g = out.grad();
      std::vector<double>& gi = input.grad();
      for (std::size_t i = 0; i < n; ++i) {
        double deriv = 0.0;
        switch (op) {
          case Pointwise::kElu:
            // exp(x) = y + 1 for x < 0; derivative at exactly 0 is taken as 1.
            deriv = input[i] >= 0.0 ? 1.0 : out[i] + 1.0;
            break;
          case Pointwise::kTanh:
            deriv = 1.0 - out[i] * out[i];
            break;
          case Pointwise::kSigmoid:
            deriv = out[i] * (1.0 - out[i]);
            break;
        }
        gi[i] += g[i] * deriv;
      }
    });
  }
  return out;
}

Tensor elu(Tape* tape, const Tensor& input) {
  return pointwise(tape, Pointwise::kElu, input);
}
Tensor tanh_op(Tape* tape, const Tensor& input) {
  return pointwise(tape, Pointwise::kTanh, input);
}
Tensor sigmoid(Tape* tape, const Tensor& input) {
  return pointwise(tape, Pointwise::kSigmoid, input);
}

Tensor add(Tape* tape, const Tensor& a, const Tensor& b) {
  require(a.shape() == b.shape(), "add: shape mismatch " +
                                      shape_str(a.shape()) + " vs " +
                                      shape_str(b.shape()));
  const std::size_t n = a.size();
  Tensor out(a.shape());
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
  out.check_finite("add");
  out.set_needs_grad(a.needs_grad() || b.needs_grad());

  if (want_grad(tape, {&a, &b})) {
    tape->push([a = a, b = b, out, n]() mutable {
      const std::vector<double>& g = out.grad();
      if (a.needs_grad()) {
        std::vector<double>& ga = a.grad();
        for (std::size_t i = 0; i < n; ++i) ga[i] += g[i];
      }
      if (b.needs_grad()) {
        std::vector<double>& gb = b.grad();
        for (std::size_t i = 0; i < n; ++i) gb[i] += g[i];
      }
    });
  }
  return out;
}

Tensor elementwise_mul(Tape* tape, const Tensor& a, const Tensor& b) {
  require(a.shape() == b.shape(), "elementwise_mul: shape mismatch " +
                                      shape_str(a.shape()) + " vs " +
                                      shape_str(b.shape()));
  const std::size_t n = a.size();
  Tensor out(a.shape());
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
  out.check_finite("elementwise_mul");
  out.set_needs_grad(a.needs_grad() || b.needs_grad());

  if (want_grad(tape, {&a, &b})) {
    tape->push([a = a, b = b, out, n]() mutable {
      const std::vector<double>& g = out.grad();
      if (a.needs_grad()) {
        std::vector<double>& ga = a.grad();
        for (std::size_t i = 0; i < n; ++i) ga[i] += g[i] * b[i];
      }
      if (b.needs_grad()) {
        std::vector<double>& gb = b.grad();
        for (std::size_t i = 0; i < n; ++i) gb[i] += g[i] * a[i];
      }
    });
  }
  return out;
}

void softmax_values(std::span<const double> logits, std::span<double> out) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    sum += out[i];
  }
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] /= sum;
}

Tensor softmax(Tape* tape, const Tensor& logits) {
  require(logits.rank() == 1 && logits.size() >= 1,
          "softmax: input must be a non-empty vector");
  const std::size_t n = logits.size();
  Tensor out({n});
  softmax_values(logits.values(), out.values_mut());
  out.check_finite("softmax");
  out.set_needs_grad(logits.needs_grad());

  if (want_grad(tape, {&logits})) {
    tape->push([logits = logits, out, n]() mutable {
      const std::vector<double>& g = out.grad();
      std::vector<double>& gi = logits.grad();
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += g[i] * out[i];
      for (std::size_t i = 0; i < n; ++i) gi[i] += out[i] * (g[i] - dot);
    });
  }
  return out;
}

CrossEntropyOut softmax_cross_entropy(Tape* tape, const Tensor& logits,
                                      std::span<const double> target) {
  require(logits.rank() == 1 && logits.size() == target.size(),
          "softmax_cross_entropy: logits/target size mismatch");
  const std::size_t n = logits.size();
  double sum = 0.0;
  for (double t : target) {
    if (t < 0.0) {
      throw InvalidInputError("softmax_cross_entropy: negative target entry");
    }
    sum += t;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidInputError(
        "softmax_cross_entropy: target does not sum to 1 (sum = " +
        std::to_string(sum) + ")");
  }

  Tensor probs({n});
  softmax_values(logits.values(), probs.values_mut());

  // Loss from logits directly so it stays finite even when a probability
  // underflows to zero.
  const double peak = *std::max_element(logits.data(), logits.data() + n);
  double lse = 0.0;
  for (std::size_t i = 0; i < n; ++i) lse += std::exp(logits[i] - peak);
  lse = std::log(lse) + peak;
  double loss_v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (target[i] > 0.0) loss_v += target[i] * (lse - logits[i]);
  }
  Tensor loss = Tensor::scalar(loss_v);
  loss.check_finite("softmax_cross_entropy");
  loss.set_needs_grad(logits.needs_grad());
  probs.set_needs_grad(false);

  if (want_grad(tape, {&logits})) {
    std::vector<double> tgt(target.begin(), target.end());
    tape->push([logits = logits, probs, loss, tgt = std::move(tgt), n]() mutable {
      const double gl = loss.grad()[0];
      std::vector<double>& gi = logits.grad();
      for (std::size_t i = 0; i < n; ++i) gi[i] += gl * (probs[i] - tgt[i]);
    });
  }
  return {loss, probs};
}

Tensor dropout(Tape* tape, const Tensor& input, double rate, bool training,
               Rng& rng) {
  if (rate < 0.0 || rate >= 1.0) {
    throw InvalidConfigError("dropout: rate must be in [0, 1)");
  }
  if (!training || rate == 0.0) return input;

  const std::size_t n = input.size();
  const double scale = 1.0 / (1.0 - rate);
  auto mask = std::make_shared<std::vector<double>>(n);
  Tensor out(input.shape());
  for (std::size_t i = 0; i < n; ++i) {
    (*mask)[i] = rng.bernoulli(rate) ? 0.0 : scale;
    out[i] = input[i] * (*mask)[i];
  }
  out.set_needs_grad(input.needs_grad());

  if (want_grad(tape, {&input})) {
    tape->push([input = input, out, mask, n]() mutable {
      const std::vector<double>& g = out.grad();
      std::vector<double>& gi = input.grad();
      for (std::size_t i = 0; i < n; ++i) gi[i] += g[i] * (*mask)[i];
    });
  }
  return out;
}

Tensor concat(Tape* tape, const Tensor& a, const Tensor& b) {
  require(a.rank() == 1 && b.rank() == 1, "concat: inputs must be vectors");
  const std::size_t na = a.size(), nb = b.size();
  Tensor out({na + nb});
  std::copy(a.data(), a.data() + na, out.data());
  std::copy(b.data(), b.data() + nb, out.data() + na);
  out.set_needs_grad(a.needs_grad() || b.needs_grad());

  if (want_grad(tape, {&a, &b})) {
    tape->push([a = a, b = b, out, na, nb]() mutable {
      const std::vector<double>& g = out.grad();
      if (a.needs_grad()) {
        std::vector<double>& ga = a.grad();
        for (std::size_t i = 0; i < na; ++i) ga[i] += g[i];
      }
      if (b.needs_grad()) {
        std::vector<double>& gb = b.grad();
        for (std::size_t i = 0; i < nb; ++i) gb[i] += g[na + i];
      }
    });
  }
  return out;
}

Tensor row(Tape* tape, const Tensor& input, std::size_t r) {
  require(input.rank() == 2, "row: input must be 2-D");
  require(r < input.dim(0), "row: index out of range");
  const std::size_t d = input.dim(1);
  Tensor out({d});
  std::copy(input.data() + r * d, input.data() + (r + 1) * d, out.data());
  out.set_needs_grad(input.needs_grad());

  if (want_grad(tape, {&input})) {
    tape->push([input = input, out, r, d]() mutable {
      const std::vector<double>& g = out.grad();
      std::vector<double>& gi = input.grad();
      for (std::size_t i = 0; i < d; ++i) gi[r * d + i] += g[i];
    });
  }
  return out;
}

Tensor stack_rows(Tape* tape, std::span<const Tensor> rows) {
  require(!rows.empty(), "stack_rows: no rows");
  const std::size_t d = rows[0].size();
  bool any_grad = false;
  for (const Tensor& t : rows) {
    require(t.rank() == 1 && t.size() == d, "stack_rows: ragged rows");
    any_grad = any_grad || t.needs_grad();
  }
  const std::size_t t_n = rows.size();
  Tensor out({t_n, d});
  for (std::size_t t = 0; t < t_n; ++t) {
    std::copy(rows[t].data(), rows[t].data() + d, out.data() + t * d);
  }
  out.set_needs_grad(any_grad);

  if (tape && any_grad) {
    std::vector<Tensor> held(rows.begin(), rows.end());
    tape->push([held = std::move(held), out, t_n, d]() mutable {
      const std::vector<double>& g = out.grad();
      for (std::size_t t = 0; t < t_n; ++t) {
        if (!held[t].needs_grad()) continue;
        std::vector<double>& gr = held[t].grad();
        for (std::size_t i = 0; i < d; ++i) gr[i] += g[t * d + i];
      }
    });
  }
  return out;
}

Tensor transpose(Tape* tape, const Tensor& input) {
  require(input.rank() == 2, "transpose: input must be 2-D");
  const std::size_t r_n = input.dim(0), c_n = input.dim(1);
  Tensor out({c_n, r_n});
  for (std::size_t r = 0; r < r_n; ++r) {
    for (std::size_t c = 0; c < c_n; ++c) out.at(c, r) = input.at(r, c);
  }
  out.set_needs_grad(input.needs_grad());

  if (want_grad(tape, {&input})) {
    tape->push([input = input, out, r_n, c_n]() mutable {
      const std::vector<double>& g = out.grad();
      std::vector<double>& gi = input.grad();
      for (std::size_t r = 0; r < r_n; ++r) {
        for (std::size_t c = 0; c < c_n; ++c) gi[r * c_n + c] += g[c * r_n + r];
      }
    });
  }
  return out;
}

Tensor seq_mean(Tape* tape, const Tensor& input) {
  require(input.rank() == 2, "seq_mean: input must be [T x D]");
  const std::size_t t_n = input.dim(0), d = input.dim(1);
  Tensor out({d});
  std::vector<double> column(t_n);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t t = 0; t < t_n; ++t) column[t] = input.at(t, c);
    std::sort(column.begin(), column.end());
    double acc = 0.0;
    for (double v : column) acc += v;
    out[c] = acc / static_cast<double>(t_n);
  }
  out.check_finite("seq_mean");
  out.set_needs_grad(input.needs_grad());

  if (want_grad(tape, {&input})) {
    tape->push([input = input, out, t_n, d]() mutable {
      const std::vector<double>& g = out.grad();
      std::vector<double>& gi = input.grad();
      const double inv = 1.0 / static_cast<double>(t_n);
      for (std::size_t t = 0; t < t_n; ++t) {
        for (std::size_t c = 0; c < d; ++c) gi[t * d + c] += g[c] * inv;
      }
    });
  }
  return out;
}

Tensor weighted_sum(Tape* tape, const Tensor& alpha, const Tensor& rows) {
  require(alpha.rank() == 1 && rows.rank() == 2 && alpha.size() == rows.dim(0),
          "weighted_sum: alpha length must match row count");
  const std::size_t t_n = rows.dim(0), d = rows.dim(1);
  Tensor out({d});
  for (std::size_t t = 0; t < t_n; ++t) {
    const double a = alpha[t];
    const double* r = rows.data() + t * d;
    for (std::size_t c = 0; c < d; ++c) out[c] += a * r[c];
  }
  out.check_finite("weighted_sum");
  out.set_needs_grad(alpha.needs_grad() || rows.needs_grad());

  if (want_grad(tape, {&alpha, &rows})) {
    tape->push([alpha = alpha, rows = rows, out, t_n, d]() mutable {
      const std::vector<double>& g = out.grad();
      if (alpha.needs_grad()) {
        std::vector<double>& ga = alpha.grad();
        for (std::size_t t = 0; t < t_n; ++t) {
          const double* r = rows.data() + t * d;
          double acc = 0.0;
          for (std::size_t c = 0; c < d; ++c) acc += g[c] * r[c];
          ga[t] += acc;
        }
      }
      if (rows.needs_grad()) {
        std::vector<double>& gr = rows.grad();
        for (std::size_t t = 0; t < t_n; ++t) {
          const double a = alpha[t];
          for (std::size_t c = 0; c < d; ++c) gr[t * d + c] += a * g[c];
        }
      }
    });
  }
  return out;
}

Tensor rowwise_mul(Tape* tape, const Tensor& rows, const Tensor& v) {
  require(rows.rank() == 2 && v.rank() == 1 && rows.dim(1) == v.size(),
          "rowwise_mul: vector length must match row width");
  const std::size_t t_n = rows.dim(0), d = rows.dim(1);
  Tensor out({t_n, d});
  for (std::size_t t = 0; t < t_n; ++t) {
    const double* r = rows.data() + t * d;
    double* o = out.data() + t * d;
    for (std::size_t c = 0; c < d; ++c) o[c] = r[c] * v[c];
  }
  out.check_finite("rowwise_mul");
  out.set_needs_grad(rows.needs_grad() || v.needs_grad());

  if (want_grad(tape, {&rows, &v})) {
    tape->push([rows = rows, v = v, out, t_n, d]() mutable {
      const std::vector<double>& g = out.grad();
      if (rows.needs_grad()) {
        std::vector<double>& gr = rows.grad();
        for (std::size_t t = 0; t < t_n; ++t) {
          for (std::size_t c = 0; c < d; ++c) {
            gr[t * d + c] += g[t * d + c] * v[c];
          }
        }
      }
      if (v.needs_grad()) {
        std::vector<double>& gv = v.grad();
        for (std::size_t t = 0; t < t_n; ++t) {
          const double* r = rows.data() + t * d;
          for (std::size_t c = 0; c < d; ++c) gv[c] += g[t * d + c] * r[c];
        }
      }
    });
  }
  return out;
}

}  // namespace cranhl::nn
